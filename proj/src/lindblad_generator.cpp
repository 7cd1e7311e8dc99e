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

#include "igtomo/lindblad_generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace igtomo {

Mat2c sigma_minus() { return (Mat2c() << 0.0, 0.0, 1.0, 0.0).finished(); }

Mat2c sigma_plus() { return sigma_minus().adjoint(); }

LindbladSpec LindbladSpec::from_hamiltonian_vector(const Vec3& e) {
  LindbladSpec spec;
  for (int mu = 0; mu < 3; ++mu) spec.hamiltonian += e[mu] * pauli(mu);
  return spec;
}

void validate(const LindbladSpec& spec) {
  if (!spec.hamiltonian.allFinite()) {
    throw std::invalid_argument("LindbladSpec: non-finite Hamiltonian entry");
  }
  if ((spec.hamiltonian - spec.hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("LindbladSpec: Hamiltonian is not Hermitian");
  }
  for (std::size_t k = 0; k < spec.jumps.size(); ++k) {
    const auto& jump = spec.jumps[k];
    if (!(jump.rate >= 0.0) || !std::isfinite(jump.rate)) {
      throw std::invalid_argument("LindbladSpec: jump " + std::to_string(k) +
                                  " has a negative or non-finite rate");
    }
    if (!jump.op.allFinite()) {
      throw std::invalid_argument("LindbladSpec: jump " + std::to_string(k) +
                                  " has a non-finite entry");
    }
  }
}

Mat2c apply_lindbladian(const LindbladSpec& spec, const Mat2c& x) {
  const cplx minus_i(0.0, -1.0);
  Mat2c out = minus_i * (spec.hamiltonian * x - x * spec.hamiltonian);
  for (const auto& jump : spec.jumps) {
    const Mat2c& l = jump.op;
    const Mat2c ldag = l.adjoint();
    const Mat2c ldl = ldag * l;
    out += jump.rate * (l * x * ldag - 0.5 * (ldl * x + x * ldl));
  }
  return out;
}

AffineGenerator lindblad_to_bloch_generator(const LindbladSpec& spec) {
  validate(spec);
  AffineGenerator g;
  for (int j = 0; j < 3; ++j) {
    const Mat2c image = apply_lindbladian(spec, pauli(j));
    for (int i = 0; i < 3; ++i) g.lambda(i, j) = 0.5 * (image * pauli(i)).trace().real();
  }
  const Mat2c image_identity = apply_lindbladian(spec, Mat2c::Identity());
  for (int i = 0; i < 3; ++i) g.c[i] = 0.5 * (image_identity * pauli(i)).trace().real();
  return g;
}

bool is_unital(const AffineGenerator& generator) {
  const double scale = std::max(1.0, generator.lambda.cwiseAbs().maxCoeff());
  return generator.c.cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

}  // namespace igtomo
