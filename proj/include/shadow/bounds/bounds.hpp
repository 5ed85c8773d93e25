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

#include "shadow/qcore/exact.hpp"

namespace shadow {

/// Largest support size for the 3^k pattern enumeration.
inline constexpr int kMaxBoundSupport = 8;

/// O_s = sum over terms q with q_i in {s_i, I} on the support of 3^|q| alpha_q P_q. s has one
/// letter per support qubit of O, in ascending qubit order. Throws std::invalid_argument if
/// s.size() differs from the support size or contains I.
Observable restricted_observable(const Observable &o, const std::vector<Pauli> &s);

struct UFunctionals {
    double u0 = 0;
    double u1 = 0;
};

/// u0 = 3^-k sum_s tr(rho O_s)^2 - tr(rho O)^2 and u1 = 3^-k sum_s [tr(rho O_s^2) - tr(rho O_s)^2],
/// with s over {X,Y,Z}^k on the support. Throws std::length_error for k > kMaxBoundSupport.
UFunctionals u_functionals(const Observable &o, const DensityMatrix &rho);
double u0(const Observable &o, const DensityMatrix &rho);
double u1(const Observable &o, const DensityMatrix &rho);

/// Var[tr(O rho_hat)] = u0 + u1 / N_S for the average snapshot of one setting.
double var_bound_linear(const Observable &o, const DensityMatrix &rho, int n_s);

/// (rho O + O rho) / 2 as an observable.
Observable symmetrized_product(const Observable &o, const DensityMatrix &rho);

/// (V (I x O) + (I x O) V) / 2 on 2n qubits, V the swap of the two n-qubit halves.
Observable swap_observable(const Observable &o);

/// Qubit cap for the 3^(2n) enumeration behind var_bound_o2.
inline constexpr int kMaxPairBoundQubits = 4;

/// (4/N_U)(u0(A) + u1(A)/N_S) + (4/N_U^2)(u0(O2, rho x rho) + u1(O2, rho x rho)/N_S)
/// with A = symmetrized_product and O2 = swap_observable.
double var_bound_o2(const Observable &o, const DensityMatrix &rho, int n_u, int n_s);
double var_bound_s2(const DensityMatrix &rho, int n_u, int n_s);

}  // namespace shadow
