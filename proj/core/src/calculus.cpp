#include "s3bs/calculus.hpp"

#include <mutex>
#include <string>

#include "s3bs/errors.hpp"

namespace s3bs {

void FDScheme::validate() const {
    if (!(h > 0.0 && h < 0.1)) throw InvalidSpec("finite-difference step must lie in (0, 0.1)");
}

FrameStencil::FrameStencil(const Point& center, const FDScheme& scheme, bool include_center)
    : center_(center), scheme_(scheme) {
    scheme.validate();
    const double h = scheme.h;
    if (include_center) {
        points_.push_back(center);
        offset_ = 1;
    }
    if (scheme.richardson) {
        // (4 D(h/2) - D(h)) / 3 with central differences D.
        per_dir_ = 4;
        weights_ = {-1.0 / (6.0 * h), 1.0 / (6.0 * h), 4.0 / (3.0 * h), -4.0 / (3.0 * h)};
    } else {
        per_dir_ = 2;
        weights_ = {0.5 / h, -0.5 / h, 0.0, 0.0};
    }
    for (std::size_t i = 1; i <= 3; ++i) {
        frame_[i - 1] = frame_vector(center, i);
        points_.push_back(frame_flow(center, i, h));
        points_.push_back(frame_flow(center, i, -h));
        if (scheme.richardson) {
            points_.push_back(frame_flow(center, i, 0.5 * h));
            points_.push_back(frame_flow(center, i, -0.5 * h));
        }
    }
}

Vec4 FrameStencil::gradient(const double* values) const {
    Vec4 g;
    for (std::size_t i = 0; i < 3; ++i) g += derivative(values, i) * frame_[i];
    return g;
}

double FrameStencil::divergence(const Vec4* values) const {
    double d = 0.0;
    for (std::size_t i = 0; i < 3; ++i) d += dot(frame_[i], derivative(values, i));
    return d;
}

Vec4 FrameStencil::curl(const Vec4* values) const {
    // sum_i u_i x (nabla_{u_i} V); the x row of the triple product discards
    // the normal part of the ambient derivative.
    Vec4 c;
    for (std::size_t i = 0; i < 3; ++i) c += cross_at(center_, frame_[i], derivative(values, i));
    return c;
}

double FrameStencil::laplacian(const double* values) const {
    if (offset_ == 0) throw InvalidSpec("laplacian needs a stencil that includes the center");
    const double h = scheme_.h;
    const double f0 = values[0];
    double lap = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double* v = values + offset_ + i * per_dir_;
        const double coarse = (v[0] - 2.0 * f0 + v[1]) / (h * h);
        if (scheme_.richardson) {
            const double fine = (v[2] - 2.0 * f0 + v[3]) / (0.25 * h * h);
            lap += (4.0 * fine - coarse) / 3.0;
        } else {
            lap += coarse;
        }
    }
    return lap;
}

void validate_orientation() {
    static std::once_flag once;
    std::call_once(once, [] {
        const Point probes[] = {Point::identity(), Point(Vec4{0.3, -0.5, 0.7, 0.2}),
                                Point(Vec4{-0.1, 0.4, 0.2, -0.9})};
        const FDScheme scheme{1e-3, true};
        for (const Point& x : probes) {
            const auto u1 = [](const Point& p) { return frame_vector(p, 1); };
            const Vec4 c = curl_of(u1, x, scheme).vec;
            const double res = norm(c + 2.0 * frame_vector(x, 1));
            if (res > 1e-6) {
                throw OrientationError("frame orientation check failed: |curl u1 + 2 u1| = " +
                                       std::to_string(res));
            }
        }
    });
}

}  // namespace s3bs
