/*
   Copyright 2026 the eprsim authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef EPRSIM_ANALYTIC_HPP
#define EPRSIM_ANALYTIC_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

/// Closed-form correlation algebra for a two-station polarization
/// coincidence experiment: anti-correlated two-component source signals,
/// a polarizing beam splitter modelled as a plane rotation, fourth-order
/// field sums, and the CHSH discriminator with an excess-coincidence
/// factor.
namespace eprsim {

/// Plane angle in radians.
using Angle = double;

inline constexpr double pi = std::numbers::pi;
inline constexpr double half_pi = std::numbers::pi / 2.0;

/// Measurement station.
enum class Side { left, right };

/// Two-component field amplitude along the horizontal/vertical basis.
struct Jones2Vector {
    double c1 = 0.0;  ///< component along axis 1 (horizontal)
    double c2 = 0.0;  ///< component along axis 2 (vertical)

    double operator[](int i) const { return i == 1 ? c1 : c2; }  // 1-based
    friend bool operator==(const Jones2Vector&, const Jones2Vector&) = default;
};

/// 2x2 rotation matrix, row-major.
struct Rot2Matrix {
    double m11 = 1.0, m12 = 0.0;
    double m21 = 0.0, m22 = 1.0;

    Jones2Vector apply(const Jones2Vector& v) const {
        return {m11 * v.c1 + m12 * v.c2, m21 * v.c1 + m22 * v.c2};
    }
};

/// Beam-splitter operator for axis orientation z:
/// [[cos z, sin z], [-sin z, cos z]].
/// Orthogonal with determinant 1 (a rotation, not an idempotent
/// projector); the two rows give the amplitudes in the two output ports.
inline Rot2Matrix pbs_rotation(Angle z) {
    const double c = std::cos(z);
    const double s = std::sin(z);
    return {c, s, -s, c};
}

/// Left-going source signal for variant n: (n, 1-n).
inline Jones2Vector source_left(int n) {
    if (n != 0 && n != 1) throw std::invalid_argument("source variant must be 0 or 1");
    return {double(n), double(1 - n)};
}

/// Right-going source signal for variant n: (1-n, n).
/// Component-wise swapped against source_left: the pair is anti-correlated.
inline Jones2Vector source_right(int n) {
    if (n != 0 && n != 1) throw std::invalid_argument("source variant must be 0 or 1");
    return {double(1 - n), double(n)};
}

/// Output-port amplitudes of the beam splitter at orientation z acting on
/// the variant-n source signal of the given side.
inline Jones2Vector field(Side side, Angle z, int n) {
    const Jones2Vector s = (side == Side::left) ? source_left(n) : source_right(n);
    return pbs_rotation(z).apply(s);
}

namespace detail {

// One term of the fourth-order numerator sum:
// (-1)^c El(zl,n)[i] Er(zr+c pi/2,n)[j] Er(zr+c pi/2,n)[k] El(zl,n)[l].
inline double numerator_term(int n, int c, int i, int j, int k, int l, Angle zl, Angle zr) {
    const double sign = (c % 2 == 0) ? 1.0 : -1.0;
    const Jones2Vector el = field(Side::left, zl, n);
    const Jones2Vector er = field(Side::right, zr + c * half_pi, n);
    return sign * el[i] * er[j] * er[k] * el[l];
}

// Denominator term: sign fixed at +1 and the shift applied as zr - c pi/2.
inline double denominator_term(int n, int c, int i, int j, int k, int l, Angle zl, Angle zr) {
    const Jones2Vector el = field(Side::left, zl, n);
    const Jones2Vector er = field(Side::right, zr - c * half_pi, n);
    return el[i] * er[j] * er[k] * el[l];
}

}  // namespace detail

/// Fourth-order correlation numerator, evaluated as the literal sextuple
/// sum over n, c in {0,1} and i, j, k, l in {1,2} with the inner term
/// taken at indices (i, j, i, j). The k and l sums therefore contribute a
/// constant factor 4. Equals -8 cos(2 zl - 2 zr).
inline double correlation_numerator(Angle zl, Angle zr) {
    double total = 0.0;
    for (int c = 0; c <= 1; ++c)
        for (int n = 0; n <= 1; ++n)
            for (int l = 1; l <= 2; ++l)
                for (int k = 1; k <= 2; ++k)
                    for (int j = 1; j <= 2; ++j)
                        for (int i = 1; i <= 2; ++i)
                            total += detail::numerator_term(n, c, i, j, i, j, zl, zr);
    return total;
}

/// Same sum with (+1)^c and the opposite quarter-turn shift; equals 8 for
/// all angle pairs, making the correlation ratio properly normalized.
inline double correlation_denominator(Angle zl, Angle zr) {
    double total = 0.0;
    for (int c = 0; c <= 1; ++c)
        for (int n = 0; n <= 1; ++n)
            for (int l = 1; l <= 2; ++l)
                for (int k = 1; k <= 2; ++k)
                    for (int j = 1; j <= 2; ++j)
                        for (int i = 1; i <= 2; ++i)
                            total += detail::denominator_term(n, c, i, j, i, j, zl, zr);
    return total;
}

/// Second-order intensity correlation: numerator over denominator,
/// equal to -cos(2(zl - zr)).
inline double correlation(Angle zl, Angle zr) {
    return correlation_numerator(zl, zr) / correlation_denominator(zl, zr);
}

/// The c = 0 branch of the numerator split into the two squared-field
/// ("standard") terms and the four-field cross term.
struct CrossTermParts {
    double standard_terms = 0.0;  ///< cos^2 zl sin^2 zr + cos^2 zr sin^2 zl
    double cross_term = 0.0;      ///< -2 cos zl sin zr cos zr sin zl
};

/// Splits sin^2(zl - zr) into its standard and cross contributions. The
/// standard terms are squared single-field intensities; the cross term is
/// a product of four distinct field amplitudes, equal to
/// -(1/2) sin(2 zl) sin(2 zr).
inline CrossTermParts cross_term_decomposition(Angle zl, Angle zr) {
    const double cl = std::cos(zl), sl = std::sin(zl);
    const double cr = std::cos(zr), sr = std::sin(zr);
    CrossTermParts parts;
    parts.standard_terms = cl * cl * sr * sr + cr * cr * sl * sl;
    parts.cross_term = -2.0 * cl * sr * cr * sl;
    return parts;
}

/// Excess factor of legitimate coincidences admitted by a wider-than-ideal
/// window. y = 1 is the ideal filtered subset; y > 1 dilutes the cross
/// term.
struct ExcessFactor {
    double value = 1.0;

    ExcessFactor() = default;
    explicit ExcessFactor(double y) : value(y) {
        if (!(y > 0.0)) throw std::invalid_argument("excess factor must be positive");
    }
    /// True in the physically meaningless range 0 < y < 1.
    bool subunit() const { return value < 1.0; }
};

/// Correlation with the cross term scaled by 1/y, as the five-term
/// expansion:
///   -cos^2 zl cos^2 zr + cos^2 zl sin^2 zr
///   - (4/y) cos zl cos zr sin zl sin zr
///   + cos^2 zr sin^2 zl - sin^2 zl sin^2 zr
/// Equivalent to -cos 2zl cos 2zr - (1/y) sin 2zl sin 2zr; reduces to
/// correlation(zl, zr) at y = 1.
inline double correlation_with_excess(Angle zl, Angle zr, ExcessFactor y) {
    const double cl = std::cos(zl), sl = std::sin(zl);
    const double cr = std::cos(zr), sr = std::sin(zr);
    return -cl * cl * cr * cr + cl * cl * sr * sr
           - (4.0 / y.value) * cl * cr * sl * sr
           + cr * cr * sl * sl - sl * sl * sr * sr;
}

/// CHSH discriminator over the four analyzer settings (x,z), (x,zz),
/// (xx,z), (xx,zz). Bounded by 2*sqrt(2) in magnitude for y >= 1.
inline double chsh(Angle x, Angle xx, Angle z, Angle zz, ExcessFactor y) {
    return correlation_with_excess(x, z, y) - correlation_with_excess(x, zz, y)
           + correlation_with_excess(xx, z, y) + correlation_with_excess(xx, zz, y);
}

/// CHSH discriminator at the violation-maximizing parametrization
/// (w, w+2v, w+v, w+3v). At y = 1 this equals cos 6v - 3 cos 2v for every
/// base orientation w; at y > 1 the w-dependence measures the loss of
/// rotational invariance.
inline double chsh_wv(Angle w, Angle v, ExcessFactor y) {
    return chsh(w, w + 2.0 * v, w + v, w + 3.0 * v, y);
}

/// chsh_wv evaluated on a cartesian grid, row-major with w as the row
/// index.
struct ChshSurface {
    std::vector<double> w_grid;
    std::vector<double> v_grid;
    std::vector<double> values;  ///< values[i * v_grid.size() + j] = SS(w_i, v_j)

    double at(std::size_t i, std::size_t j) const { return values[i * v_grid.size() + j]; }
};

inline ChshSurface chsh_surface(std::span<const Angle> w_grid, std::span<const Angle> v_grid,
                                ExcessFactor y) {
    if (w_grid.empty() || v_grid.empty())
        throw std::invalid_argument("chsh_surface requires non-empty grids");
    ChshSurface surface;
    surface.w_grid.assign(w_grid.begin(), w_grid.end());
    surface.v_grid.assign(v_grid.begin(), v_grid.end());
    surface.values.reserve(w_grid.size() * v_grid.size());
    for (const double w : w_grid)
        for (const double v : v_grid) surface.values.push_back(chsh_wv(w, v, y));
    return surface;
}

}  // namespace eprsim

#endif  // EPRSIM_ANALYTIC_HPP
