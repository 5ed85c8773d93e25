// Copyright 2026 The Shadow Distill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "shadow/qcore/pauli.hpp"
#include "shadow/qcore/state.hpp"

namespace shadow {

/// Single-qubit rotation u applied before a computational-basis measurement to measure in the
/// eigenbasis of p: X -> H, Y -> H S^dagger, Z and I -> identity. Outcome bit b corresponds to
/// eigenvalue (-1)^b of p, and u^dagger |b><b| u = (I + (-1)^b p) / 2.
Matrix basis_rotation(Pauli p);

/// Born distribution diag(U rho U^dagger) with U = (x)_k basis_rotation(letters[k]).
/// Index bit (n-1-k) holds qubit k's outcome.
std::vector<double> measurement_distribution(const Matrix &rho, const std::vector<Pauli> &letters);
std::vector<double> measurement_distribution(const DensityMatrix &rho, const std::vector<Pauli> &letters);

}  // namespace shadow
