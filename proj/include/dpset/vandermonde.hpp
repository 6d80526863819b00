// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dpset/field.hpp"
#include "dpset/rng.hpp"

namespace dpset {

/// One constraint of a Vandermonde system: the row is implicit in the
/// evaluation point u, the rhs is the value the solution polynomial must
/// take there. All points of one system have distinct u.
struct VdmPoint {
  felem u = 0;
  felem rhs = 0;
};

/// [1, u, u^2, ..., u^(k-1)]. Requires k >= 1.
std::vector<felem> row_vdm(felem u, std::uint32_t k, const Field& field);

/// Coefficients of a degree-<k polynomial P with P(u_i) = rhs_i for every
/// point, sampled uniformly from the affine space of such polynomials: the
/// unique interpolant of the points plus a uniformly random multiple of
/// their vanishing polynomial. Distinct points of count k' <= k <= q always
/// admit a solution, so this never fails.
///
/// Duplicate evaluation points or k > q are contract violations and throw.
std::vector<felem> solve_vdm(std::span<const VdmPoint> points, std::uint32_t k,
                             const Field& field, RngStream& rng);

/// P(x) by Horner's rule; coeffs[j] is the coefficient of X^j.
felem poly_eval(std::span<const felem> coeffs, felem x, const Field& field);

}  // namespace dpset
