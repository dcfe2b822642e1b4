#pragma once

// Finite-difference calculus along the exact flows of the left-invariant
// frame u_i(x) = x q_i. The flows are great circles, so no chart metric is
// involved: second differences along the three flows sum to the Laplacian and
// tangential parts of ambient differences are covariant derivatives.
//
// A FrameStencil separates where a field is sampled from how the samples are
// combined, which lets quadrature code difference integrands node by node
// (common random numbers) and integrate the result.

#include <array>
#include <cstddef>
#include <type_traits>
#include <vector>

#include "s3bs/geometry.hpp"

namespace s3bs {

struct FDScheme {
    double h = 1e-3;
    /// Combine steps h and h/2 to cancel the O(h^2) term.
    bool richardson = false;

    /// Throws InvalidSpec unless 0 < h < 0.1.
    void validate() const;
};

inline Vec4 ambient(const TangentVector& v) { return v.vec; }
inline const Vec4& ambient(const Vec4& v) { return v; }
inline double ambient(double v) { return v; }

class FrameStencil {
public:
    FrameStencil(const Point& center, const FDScheme& scheme, bool include_center = false);

    const Point& center() const { return center_; }
    /// Sample locations; the center comes first when included.
    const std::vector<Point>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }

    /// Derivative along u_{i+1}, i in {0, 1, 2}, from values at points().
    template <class T>
    T derivative(const T* values, std::size_t i) const {
        T acc = values[offset_ + i * per_dir_] * weights_[0];
        for (std::size_t k = 1; k < per_dir_; ++k) acc += values[offset_ + i * per_dir_ + k] * weights_[k];
        return acc;
    }

    Vec4 gradient(const double* values) const;
    double divergence(const Vec4* values) const;
    Vec4 curl(const Vec4* values) const;
    /// Requires include_center.
    double laplacian(const double* values) const;

private:
    Point center_;
    FDScheme scheme_;
    std::size_t offset_ = 0;
    std::size_t per_dir_ = 2;
    std::array<double, 4> weights_{};
    std::array<Vec4, 3> frame_{};
    std::vector<Point> points_;
};

namespace detail {
template <class F>
using sample_t = std::decay_t<decltype(ambient(std::declval<F&>()(std::declval<const Point&>())))>;

template <class F>
std::vector<sample_t<F>> sample(F& f, const FrameStencil& st) {
    std::vector<sample_t<F>> v;
    v.reserve(st.size());
    for (const Point& p : st.points()) v.push_back(ambient(f(p)));
    return v;
}
}  // namespace detail

/// Derivative of f along u_i (i in {1, 2, 3}) at x.
template <class F>
auto frame_derivative(F&& f, std::size_t i, const Point& x, const FDScheme& scheme = {}) {
    const FrameStencil st(x, scheme);
    const auto v = detail::sample(f, st);
    return st.derivative(v.data(), i - 1);
}

template <class F>
TangentVector gradient_of(F&& f, const Point& x, const FDScheme& scheme = {}) {
    const FrameStencil st(x, scheme);
    const auto v = detail::sample(f, st);
    return TangentVector(x, st.gradient(v.data()));
}

template <class F>
double divergence_of(F&& v, const Point& x, const FDScheme& scheme = {}) {
    const FrameStencil st(x, scheme);
    const auto s = detail::sample(v, st);
    return st.divergence(s.data());
}

template <class F>
TangentVector curl_of(F&& v, const Point& x, const FDScheme& scheme = {}) {
    const FrameStencil st(x, scheme);
    const auto s = detail::sample(v, st);
    return TangentVector(x, st.curl(s.data()));
}

template <class F>
double laplacian_of(F&& f, const Point& x, const FDScheme& scheme = {}) {
    const FrameStencil st(x, scheme, true);
    const auto v = detail::sample(f, st);
    return st.laplacian(v.data());
}

/// Checks that the finite-difference curl of u_1 is -2 u_1 at a few points;
/// throws OrientationError otherwise. Runs the check once per process.
void validate_orientation();

}  // namespace s3bs
