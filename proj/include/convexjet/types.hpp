#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace convexjet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One datum of the extension problem: point, value, prescribed gradient.
struct Jet {
    Vector x;
    double f = 0.0;
    Vector g;
};

/// Numerical thresholds used throughout the library. All strictly positive.
struct Tolerances {
    double tol_pt = 1e-9;    ///< point-coincidence threshold
    double tol_eq = 1e-14;   ///< absolute activity (equality) threshold for slacks
    double tol_grad = 1e-7;  ///< gradient-coincidence threshold
    double tol_rank = 1e-9;  ///< relative singular-value cutoff for rank decisions
    double tol_pos = 1e-9;   ///< strict-inequality margin

    /// Activity threshold for a slack assembled from terms of magnitude `scale`.
    /// Slack at or below this counts as equality in the supporting-plane sense.
    double activity(double scale) const {
        return std::max(tol_eq, 32.0 * 2.220446049250313e-16 * (1.0 + scale));
    }

    void check() const {
        if (tol_pt <= 0 || tol_eq <= 0 || tol_grad <= 0 || tol_rank <= 0 || tol_pos <= 0)
            throw std::invalid_argument("Tolerances: all thresholds must be positive");
    }
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }

/// Finite ordered collection of jets sharing one ambient dimension.
///
/// Duplicate points with identical (f, g) are deduplicated on construction;
/// duplicate points with conflicting data are rejected.
class JetDataset {
  public:
    JetDataset() = default;
    explicit JetDataset(int dim) : dim_(dim) {
        if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("JetDataset: dim out of range [1,8]");
    }

    static constexpr int kMaxDim = 8;

    int dim() const { return dim_; }
    std::size_t size() const { return jets_.size(); }
    bool empty() const { return jets_.empty(); }
    const Jet& operator[](std::size_t i) const { return jets_[i]; }
    const std::vector<Jet>& jets() const { return jets_; }

    /// Appends a jet, deduplicating coincident points. Throws on dimension
    /// mismatch, non-finite entries, or a point collision with conflicting data.
    void add(const Jet& j, const Tolerances& tol = {}) {
        if (dim_ == 0) dim_ = static_cast<int>(j.x.size());
        if (j.x.size() != dim_ || j.g.size() != dim_)
            throw std::invalid_argument("JetDataset::add: dimension mismatch");
        if (!j.x.allFinite() || !std::isfinite(j.f) || !j.g.allFinite())
            throw std::invalid_argument("JetDataset::add: non-finite entry");
        for (const Jet& k : jets_) {
            if ((k.x - j.x).norm() <= tol.tol_pt) {
                if (std::abs(k.f - j.f) <= tol.activity(std::abs(k.f)) * 10 + tol.tol_pt &&
                    (k.g - j.g).norm() <= tol.tol_grad)
                    return;  // same point, same data: dedupe
                throw std::invalid_argument("JetDataset::add: duplicate point with conflicting jet");
            }
        }
        jets_.push_back(j);
    }

    /// Largest gradient norm (K of the Lipschitz theory). Zero on empty set.
    double gradient_bound() const {
        double k = 0.0;
        for (const Jet& j : jets_) k = std::max(k, j.g.norm());
        return k;
    }

    /// Coarse magnitude of the data, used for scaling tolerances.
    double scale() const {
        double s = 0.0;
        for (const Jet& j : jets_) s = std::max({s, std::abs(j.f), j.x.lpNorm<Eigen::Infinity>()});
        return s;
    }

  private:
    int dim_ = 0;
    std::vector<Jet> jets_;
};

}  // namespace convexjet
