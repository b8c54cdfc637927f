#include "convexjet/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace convexjet {

namespace {

using Row = SeidelLP::Row;
using Point = std::array<double, SeidelLP::kMaxDim>;

double dot(int dim, const Row& r, const Point& u) {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += r[j] * u[j];
    return s;
}

// Recursive Seidel step. rows[0..n) are processed in order; the starting
// point is the box corner optimal for c. Returns false when the constraint
// set is detected infeasible (beyond eps).
bool solve_rec(int dim, const std::vector<Row>& rows, const Point& c, const Point& lo, const Point& hi,
               double eps, Point& u) {
    if (dim == 1) {
        double a = lo[0], b = hi[0];
        for (const Row& r : rows) {
            if (std::abs(r[0]) < 1e-300) {
                if (r[1] < -eps) return false;  // 0 <= rhs violated
                continue;
            }
            double bound = r[1] / r[0];
            if (r[0] > 0) b = std::min(b, bound);
            else a = std::max(a, bound);
        }
        if (a > b + eps) return false;
        if (a > b) b = a;
        u[0] = (c[0] >= 0) ? b : a;
        return true;
    }

    for (int j = 0; j < dim; ++j) u[j] = (c[j] >= 0) ? hi[j] : lo[j];

    for (std::size_t k = 0; k < rows.size(); ++k) {
        const Row& rk = rows[k];
        if (dot(dim, rk, u) <= rk[dim] + eps) continue;

        // u violates rk: the optimum of the prefix lies on rk's boundary.
        int p = 0;
        for (int j = 1; j < dim; ++j)
            if (std::abs(rk[j]) > std::abs(rk[p])) p = j;
        if (std::abs(rk[p]) < 1e-300) return false;  // degenerate violated row

        // Eliminate variable p via  u_p = (rhs - sum_{j!=p} a_j u_j) / a_p.
        const double inv = 1.0 / rk[p];
        auto reduce_row = [&](const Row& r, Row& s) {
            int t = 0;
            for (int j = 0; j < dim; ++j) {
                if (j == p) continue;
                s[t++] = r[j] - r[p] * rk[j] * inv;
            }
            s[dim - 1] = r[dim] - r[p] * rk[dim] * inv;
        };

        std::vector<Row> sub;
        sub.reserve(k + 2);
        for (std::size_t i = 0; i < k; ++i) {
            Row s{};
            reduce_row(rows[i], s);
            sub.push_back(s);
        }
        {  // the eliminated variable's own box bounds become rows
            Row up{}, dn{};
            Row rup{};
            std::fill(rup.begin(), rup.end(), 0.0);
            rup[p] = 1.0;
            rup[dim] = hi[p];
            reduce_row(rup, up);
            rup[p] = -1.0;
            rup[dim] = -lo[p];
            reduce_row(rup, dn);
            sub.push_back(up);
            sub.push_back(dn);
        }

        Point csub{}, losub{}, hisub{};
        {
            int t = 0;
            for (int j = 0; j < dim; ++j) {
                if (j == p) continue;
                csub[t] = c[j] - c[p] * rk[j] * inv;
                losub[t] = lo[j];
                hisub[t] = hi[j];
                ++t;
            }
        }

        Point usub{};
        if (!solve_rec(dim - 1, sub, csub, losub, hisub, eps, usub)) return false;

        int t = 0;
        double acc = rk[dim];
        for (int j = 0; j < dim; ++j) {
            if (j == p) continue;
            u[j] = usub[t++];
            acc -= rk[j] * u[j];
        }
        u[p] = acc * inv;
    }
    return true;
}

}  // namespace

bool SeidelLP::solve(int dim, const std::vector<Row>& rows, const Point& c, const Point& lo,
                     const Point& hi, double eps, Point& out) {
    return solve_rec(dim, rows, c, lo, hi, eps, out);
}

int SeidelLP::pick_pivot(int dim, const Row& r) {
    int p = 0;
    for (int j = 1; j < dim; ++j)
        if (std::abs(r[j]) > std::abs(r[p])) p = j;
    return p;
}

SeidelLP::Row SeidelLP::reduce(int dim, const Row& pivot_row, int p, const Row& r) {
    Row s{};
    const double inv = 1.0 / pivot_row[p];
    int t = 0;
    for (int j = 0; j < dim; ++j) {
        if (j == p) continue;
        s[t++] = r[j] - r[p] * pivot_row[j] * inv;
    }
    s[dim - 1] = r[dim] - r[p] * pivot_row[dim] * inv;
    return s;
}

}  // namespace convexjet
