#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bonnetlab {

/// Geometry of a rectangular parameter grid: ns x nt nodes, uniformly spaced,
/// endpoints included. Index i runs over s, j over t.
struct GridShape {
    int ns = 0, nt = 0;
    double s0 = 0.0, t0 = 0.0;
    double hs = 0.0, ht = 0.0;

    double s(int i) const { return s0 + i * hs; }
    double t(int j) const { return t0 + j * ht; }
    std::size_t count() const { return static_cast<std::size_t>(ns) * nt; }

    bool operator==(const GridShape& o) const {
        return ns == o.ns && nt == o.nt && s0 == o.s0 && t0 == o.t0 && hs == o.hs && ht == o.ht;
    }
};

template <class T>
class Grid2D {
public:
    Grid2D() = default;
    explicit Grid2D(const GridShape& shape, const T& fill = T{})
        : shape_(shape), data_(shape.count(), fill) {}

    const GridShape& shape() const { return shape_; }
    int ns() const { return shape_.ns; }
    int nt() const { return shape_.nt; }

    T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * shape_.nt + j]; }
    const T& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * shape_.nt + j]; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

private:
    GridShape shape_;
    std::vector<T> data_;
};

inline void require_same_shape(const GridShape& a, const GridShape& b, const char* where) {
    if (!(a == b)) throw std::logic_error(std::string(where) + ": grid shape mismatch");
}

} // namespace bonnetlab
