#pragma once

#include <algorithm>
#include <vector>

#include "convexjet/types.hpp"

namespace convexjet {

/// Tensor grid with per-axis sorted node coordinates. Axes need not be
/// uniform: data snapping inserts extra nodes.
struct GridSpec {
    std::vector<std::vector<double>> axes;
    double h_grid = 0.0;  ///< base spacing (max over axes of the uniform step)

    int dim() const { return static_cast<int>(axes.size()); }

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& a : axes) n *= a.size();
        return n;
    }

    /// Uniform box grid; count per axis >= 9.
    static GridSpec box(const Vector& lo, const Vector& hi, const std::vector<int>& counts) {
        GridSpec s;
        s.axes.resize(lo.size());
        for (int a = 0; a < lo.size(); ++a) {
            int c = counts[a];
            if (c < 9) throw std::invalid_argument("GridSpec: count per axis must be >= 9");
            if (!(hi(a) > lo(a))) throw std::invalid_argument("GridSpec: empty axis range");
            double h = (hi(a) - lo(a)) / (c - 1);
            s.h_grid = std::max(s.h_grid, h);
            s.axes[a].resize(c);
            for (int i = 0; i < c; ++i) s.axes[a][i] = lo(a) + i * h;
            s.axes[a].back() = hi(a);
        }
        return s;
    }

    /// Inserts coordinate t into axis a unless a node already sits within tol.
    void insert(int a, double t, double tol) {
        auto& ax = axes[a];
        auto it = std::lower_bound(ax.begin(), ax.end(), t);
        if (it != ax.end() && std::abs(*it - t) <= tol) return;
        if (it != ax.begin() && std::abs(*(it - 1) - t) <= tol) return;
        ax.insert(it, t);
    }

    /// Index of the node equal to t on axis a within tol; -1 when absent.
    int find(int a, double t, double tol) const {
        const auto& ax = axes[a];
        auto it = std::lower_bound(ax.begin(), ax.end(), t - tol);
        if (it != ax.end() && std::abs(*it - t) <= tol) return static_cast<int>(it - ax.begin());
        return -1;
    }

    void multi_index(std::size_t flat, int* idx) const {
        for (int a = 0; a < dim(); ++a) {
            idx[a] = static_cast<int>(flat % axes[a].size());
            flat /= axes[a].size();
        }
    }

    std::size_t flat_index(const int* idx) const {
        std::size_t f = 0, stride = 1;
        for (int a = 0; a < dim(); ++a) {
            f += static_cast<std::size_t>(idx[a]) * stride;
            stride *= axes[a].size();
        }
        return f;
    }

    Vector node(std::size_t flat) const {
        int idx[8];
        multi_index(flat, idx);
        Vector x(dim());
        for (int a = 0; a < dim(); ++a) x(a) = axes[a][idx[a]];
        return x;
    }

    double min_spacing(int a) const {
        double h = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < axes[a].size(); ++i) h = std::min(h, axes[a][i] - axes[a][i - 1]);
        return h;
    }

    bool covers(const Vector& p) const {
        for (int a = 0; a < dim(); ++a)
            if (p(a) < axes[a].front() || p(a) > axes[a].back()) return false;
        return true;
    }
};

struct GridFunction {
    GridSpec spec;
    std::vector<double> values;

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

}  // namespace convexjet
