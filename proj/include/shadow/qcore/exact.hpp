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

#include "shadow/qcore/pauli.hpp"
#include "shadow/qcore/state.hpp"

namespace shadow {

/// tr(rho^m), m >= 1, via the eigenvalues of rho.
double purity_exact(const DensityMatrix &rho, int m);

/// tr(O rho). Throws std::invalid_argument on dimension mismatch.
double expval_exact(const DensityMatrix &rho, const Observable &o);

/// Virtual-distillation value tr(O rho^m) / tr(rho^m). Throws std::domain_error if tr(rho^m)
/// is numerically zero.
double mitigated_expval_exact(const DensityMatrix &rho, const Observable &o, int m);

/// Same quantity computed on an arbitrary Hermitian matrix (used for shadow-reconstructed
/// states, which need not be positive).
double mitigated_expval_matrix(const Matrix &rho, const Observable &o, int m);

struct DistillResult {
    PureState state;
    double eigenvalue;
    /// Gap between the two largest eigenvalues.
    double gap;
    /// Set when gap < kExactTol; the returned vector is then one arbitrary (but deterministic)
    /// element of the top eigenspace.
    bool degenerate;
};

/// m -> infinity limit of virtual distillation: the dominant eigenvector of rho, with global
/// phase fixed so its first non-negligible amplitude is real and positive.
DistillResult dominant_eigenvector_distill(const DensityMatrix &rho);
DistillResult dominant_eigenvector_distill(const Matrix &hermitian);

/// <v|O|v>.
double expval_pure(const PureState &v, const Observable &o);

}  // namespace shadow
