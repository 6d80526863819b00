// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#include "dpset/vandermonde.hpp"

#include <stdexcept>
#include <string>

namespace dpset {

std::vector<felem> row_vdm(felem u, std::uint32_t k, const Field& field) {
  if (k < 1) throw std::invalid_argument("row length must be at least 1");
  std::vector<felem> row(k);
  felem power = 1;
  for (std::uint32_t j = 0; j < k; ++j) {
    row[j] = power;
    power = field.mul(power, u);
  }
  return row;
}

std::vector<felem> solve_vdm(std::span<const VdmPoint> points, std::uint32_t k,
                             const Field& field, RngStream& rng) {
  const std::uint32_t q = field.order();
  if (k < 1 || k > q) {
    throw std::invalid_argument("column count must satisfy 1 <= k <= q");
  }
  const auto count = static_cast<std::uint32_t>(points.size());
  if (count > k) {
    throw std::invalid_argument("more constraints than columns");
  }
  std::vector<bool> seen(q, false);
  for (const auto& p : points) {
    if (p.u >= q) throw std::invalid_argument("evaluation point outside the field");
    if (seen[p.u]) {
      throw std::invalid_argument("duplicate evaluation point " + std::to_string(p.u));
    }
    seen[p.u] = true;
  }

  // Unique interpolant of the points by divided differences, O(k'^2).
  std::vector<felem> dd(count);
  for (std::uint32_t i = 0; i < count; ++i) dd[i] = points[i].rhs;
  for (std::uint32_t level = 1; level < count; ++level) {
    for (std::uint32_t i = count - 1; i >= level; --i) {
      const felem num = field.sub(dd[i], dd[i - 1]);
      const felem den = field.sub(points[i].u, points[i - level].u);
      dd[i] = field.mul(num, field.inv(den));
    }
  }
  // Newton form -> monomial coefficients: fold Q <- Q * (X - u_j) + dd[j]
  // from the highest divided difference down.
  std::vector<felem> interpolant;
  if (count > 0) {
    interpolant.assign(1, dd[count - 1]);
    for (std::uint32_t j = count - 1; j-- > 0;) {
      std::vector<felem> next(interpolant.size() + 1, 0);
      const felem shift = field.neg(points[j].u);
      for (std::size_t t = 0; t < interpolant.size(); ++t) {
        next[t + 1] = field.add(next[t + 1], interpolant[t]);
        next[t] = field.add(next[t], field.mul(interpolant[t], shift));
      }
      next[0] = field.add(next[0], dd[j]);
      interpolant = std::move(next);
    }
  }

  // Vanishing polynomial Z = prod (X - u_i), degree k'.
  std::vector<felem> vanishing(1, 1);
  for (const auto& p : points) {
    std::vector<felem> next(vanishing.size() + 1, 0);
    const felem shift = field.neg(p.u);
    for (std::size_t t = 0; t < vanishing.size(); ++t) {
      next[t + 1] = field.add(next[t + 1], vanishing[t]);
      next[t] = field.add(next[t], field.mul(vanishing[t], shift));
    }
    vanishing = std::move(next);
  }

  // Uniform kernel component R * Z with deg R < k - k'.
  std::vector<felem> x(k, 0);
  for (std::size_t t = 0; t < interpolant.size(); ++t) x[t] = interpolant[t];
  const std::uint32_t free_count = k - count;
  for (std::uint32_t i = 0; i < free_count; ++i) {
    const felem r = uniform_element(field, rng);
    if (r == 0) continue;
    for (std::size_t t = 0; t < vanishing.size(); ++t) {
      x[i + t] = field.add(x[i + t], field.mul(r, vanishing[t]));
    }
  }
  return x;
}

felem poly_eval(std::span<const felem> coeffs, felem x, const Field& field) {
  felem acc = 0;
  for (std::size_t j = coeffs.size(); j-- > 0;) {
    acc = field.add(field.mul(acc, x), coeffs[j]);
  }
  return acc;
}

}  // namespace dpset
