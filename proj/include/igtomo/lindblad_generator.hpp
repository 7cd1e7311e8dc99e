// Copyright 2026 The igtomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string_view>
#include <vector>

#include "igtomo/gksl_dynamics.hpp"

namespace igtomo {

/// Operator conventions used throughout:
///   sigma_z = diag(1, -1), sigma_- = (sigma_x - i sigma_y)/2 = [[0,0],[1,0]],
///   so [sigma_-, sigma_+] = -sigma_z and amplitude damping drives a_z -> -1.
inline constexpr std::string_view kPauliConvention =
    "sigma_z=diag(1,-1); sigma_minus=(sigma_x-i*sigma_y)/2=[[0,0],[1,0]]; "
    "[sigma_minus,sigma_plus]=-sigma_z";

Mat2c sigma_minus();
Mat2c sigma_plus();

struct JumpOperator {
  Mat2c op;
  double rate = 0.0;
};

/// H plus a list of (L_k, gamma_k). Construction does not validate; the
/// generator call does.
struct LindbladSpec {
  Mat2c hamiltonian = Mat2c::Zero();
  std::vector<JumpOperator> jumps;

  /// H = e . sigma.
  static LindbladSpec from_hamiltonian_vector(const Vec3& e);
};

/// Throws std::invalid_argument on a negative rate, a non-Hermitian
/// Hamiltonian (1e-12) or non-finite entries.
void validate(const LindbladSpec& spec);

/// -i[H, X] + sum_k gamma_k (L X L^dag - {L^dag L, X}/2).
Mat2c apply_lindbladian(const LindbladSpec& spec, const Mat2c& x);

/// Bloch form of the full GKSL superoperator, obtained by applying it to the
/// Pauli basis and to the identity:
///   lambda_ij = Tr[L(sigma_j) sigma_i] / 2,   c_i = Tr[L(I) sigma_i] / 2,
/// with L(I) = sum_k gamma_k [L_k, L_k^dag].
AffineGenerator lindblad_to_bloch_generator(const LindbladSpec& spec);

/// c = 0 to a relative tolerance of the generator scale.
bool is_unital(const AffineGenerator& generator);

}  // namespace igtomo
