#include "spikepca/arrowhead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "spikepca/errors.hpp"

namespace spikepca {

Matrix ArrowheadMatrix::dense() const {
    const std::size_t p = dim();
    Matrix m(p, p);
    m(0, 0) = head;
    for (std::size_t j = 0; j + 1 < p; ++j) {
        m(0, j + 1) = shaft[j];
        m(j + 1, 0) = shaft[j];
        m(j + 1, j + 1) = tail[j];
    }
    return m;
}

ArrowheadReduction arrowhead_reduce(const Matrix& s) {
    const std::size_t p = s.rows();
    if (p < 2) throw PreconditionError("arrowhead_reduce: p must be >= 2");
    const double tol = 1e-10 * std::max(1.0, linalg::max_abs(s));
    if (linalg::asymmetry(s) > tol) throw NotSymmetric("arrowhead_reduce: matrix not symmetric");

    Matrix minor(p - 1, p - 1);
    for (std::size_t i = 1; i < p; ++i)
        for (std::size_t j = 1; j < p; ++j) minor(i - 1, j - 1) = s(i, j);
    EigResult eig = sym_eig(minor);

    ArrowheadReduction red;
    red.arrow.head = s(0, 0);
    red.arrow.tail = eig.values;
    red.arrow.shaft.assign(p - 1, 0.0);
    for (std::size_t c = 0; c + 1 < p; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < p; ++i) acc += eig.vectors(i, c) * s(i + 1, 0);
        red.arrow.shaft[c] = acc;
    }
    // V = blockdiag(1, W^T): V S V^T is the arrowhead form
    red.basis = Matrix(p, p);
    red.basis(0, 0) = 1.0;
    for (std::size_t r = 1; r < p; ++r)
        for (std::size_t c = 1; c < p; ++c) red.basis(r, c) = eig.vectors(c - 1, r - 1);
    return red;
}

namespace {

struct Pole {
    double value = 0.0;                // representative tail value
    double weight2 = 0.0;              // sum of shaft^2 over the merged group
    std::vector<std::size_t> members;  // original shaft/tail indices
};

struct SecularFn {
    double head;
    const std::vector<Pole>& poles;
    std::size_t anchor;
    std::vector<double> gaps;  // poles[anchor].value - poles[k].value

    SecularFn(double h, const std::vector<Pole>& ps, std::size_t a)
        : head(h), poles(ps), anchor(a), gaps(ps.size()) {
        for (std::size_t k = 0; k < ps.size(); ++k) gaps[k] = ps[a].value - ps[k].value;
    }

    // f(lambda) and f'(lambda) at lambda = poles[anchor].value + delta
    void eval(double delta, double& f, double& fp) const {
        f = (poles[anchor].value + delta) - head;
        fp = 1.0;
        for (std::size_t k = 0; k < poles.size(); ++k) {
            const double den = gaps[k] + delta;
            const double term = poles[k].weight2 / den;
            f -= term;
            fp += term / den;
        }
    }
};

// Root of the secular function inside (delta_lo, delta_hi) in anchored
// coordinates. Endpoint signs may be supplied as conventions (poles count as
// -inf / +inf without evaluation).
double solve_bracketed(const SecularFn& fn, double lo, double hi, int cap, bool* converged) {
    double x = 0.5 * (lo + hi);
    *converged = false;
    for (int it = 0; it < cap; ++it) {
        double f, fp;
        fn.eval(x, f, fp);
        if (f == 0.0) {
            *converged = true;
            return x;
        }
        if (f < 0.0)
            lo = x;
        else
            hi = x;
        const double width = hi - lo;
        if (width <= 4.0 * std::numeric_limits<double>::epsilon() *
                             std::max(std::fabs(lo), std::fabs(hi)) +
                         1e-280) {
            *converged = true;
            return 0.5 * (lo + hi);
        }
        const double newton = x - f / fp;
        x = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
    }
    return 0.5 * (lo + hi);
}

}  // namespace

EigResult arrowhead_eig(const ArrowheadMatrix& a, const SecularOptions& opt) {
    const std::size_t p = a.dim();
    if (p < 2) throw PreconditionError("arrowhead_eig: p must be >= 2");
    if (a.shaft.size() != a.tail.size())
        throw PreconditionError("arrowhead_eig: shaft/tail size mismatch");

    double max_tail = 0.0;
    for (double t : a.tail) max_tail = std::max(max_tail, std::fabs(t));
    const double scale = std::fabs(a.head) + max_tail;
    const double deflation = opt.deflation_scale * scale;

    std::vector<std::size_t> active, deflated;
    for (std::size_t j = 0; j + 1 < p; ++j) {
        if (std::fabs(a.shaft[j]) <= deflation)
            deflated.push_back(j);
        else
            active.push_back(j);
    }

    // merge coincident poles among the active entries
    std::sort(active.begin(), active.end(),
              [&](std::size_t i, std::size_t j) { return a.tail[i] > a.tail[j]; });
    const double merge_tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
    std::vector<Pole> poles;
    for (std::size_t idx : active) {
        if (!poles.empty() && poles.back().value - a.tail[idx] <= merge_tol) {
            poles.back().weight2 += a.shaft[idx] * a.shaft[idx];
            poles.back().members.push_back(idx);
        } else {
            Pole pl;
            pl.value = a.tail[idx];
            pl.weight2 = a.shaft[idx] * a.shaft[idx];
            pl.members.push_back(idx);
            poles.push_back(pl);
        }
    }
    const std::size_t m = poles.size();

    std::vector<std::pair<double, Vector>> pairs;
    pairs.reserve(p);

    if (m == 0) {
        Vector v(p, 0.0);
        v[0] = 1.0;
        pairs.emplace_back(a.head, v);
    } else {
        double shaft_l1 = 0.0;
        for (std::size_t idx : active) shaft_l1 += std::fabs(a.shaft[idx]);
        const double slack = 1e-9 * std::max(scale, 1e-300);

        // anchored root positions: (anchor pole index, delta)
        std::vector<std::pair<std::size_t, double>> roots;
        const std::int64_t nroots = static_cast<std::int64_t>(m + 1);
        roots.resize(m + 1);
        std::vector<char> ok(m + 1, 1);

#pragma omp parallel for schedule(dynamic)
        for (std::int64_t r = 0; r < nroots; ++r) {
            bool conv = false;
            if (r == 0) {
                // above the largest pole
                SecularFn fn(a.head, poles, 0);
                const double hi = std::max(a.head, poles[0].value) + shaft_l1 + slack -
                                  poles[0].value;
                const double delta = solve_bracketed(fn, 0.0, hi, opt.max_iterations, &conv);
                roots[0] = {0, delta};
            } else if (static_cast<std::size_t>(r) == m) {
                // below the smallest pole
                SecularFn fn(a.head, poles, m - 1);
                const double lo = std::min(a.head, poles[m - 1].value) - shaft_l1 - slack -
                                  poles[m - 1].value;
                const double delta = solve_bracketed(fn, lo, 0.0, opt.max_iterations, &conv);
                roots[m] = {m - 1, delta};
            } else {
                // between poles r-1 (upper) and r (lower)
                const std::size_t up = static_cast<std::size_t>(r) - 1;
                const std::size_t low = static_cast<std::size_t>(r);
                const double gap = poles[up].value - poles[low].value;
                // decide the anchor by the sign at the midpoint
                SecularFn fn_low(a.head, poles, low);
                double fmid, fpmid;
                fn_low.eval(0.5 * gap, fmid, fpmid);
                if (fmid > 0.0) {
                    const double delta =
                        solve_bracketed(fn_low, 0.0, 0.5 * gap, opt.max_iterations, &conv);
                    roots[r] = {low, delta};
                } else {
                    SecularFn fn_up(a.head, poles, up);
                    const double delta =
                        solve_bracketed(fn_up, -0.5 * gap, 0.0, opt.max_iterations, &conv);
                    roots[r] = {up, delta};
                }
            }
            ok[r] = conv ? 1 : 0;
        }
        for (std::size_t r = 0; r <= m; ++r)
            if (!ok[r])
                throw RootBracketFailure(
                    "arrowhead_eig: secular root not resolved within the iteration cap "
                    "(pathological tail clustering)");

        for (std::size_t r = 0; r <= m; ++r) {
            const std::size_t anchor = roots[r].first;
            const double delta = roots[r].second;
            const double lambda = poles[anchor].value + delta;
            Vector v(p, 0.0);
            v[0] = 1.0;
            bool pole_hit = false;
            std::size_t hit_index = 0;
            for (std::size_t idx : active) {
                const double den = (poles[anchor].value - a.tail[idx]) + delta;
                if (den == 0.0) {
                    pole_hit = true;
                    hit_index = idx;
                    break;
                }
                v[idx + 1] = a.shaft[idx] / den;
            }
            if (pole_hit) {
                // root indistinguishable from the pole: shaft entry is at the
                // deflation floor, coordinate vector is exact to that accuracy
                std::fill(v.begin(), v.end(), 0.0);
                v[hit_index + 1] = 1.0;
                pairs.emplace_back(a.tail[hit_index], v);
            } else {
                linalg::normalize(v);
                pairs.emplace_back(lambda, v);
            }
        }
    }

    // surplus eigenpairs of merged pole groups: orthonormal completion of the
    // in-group shaft direction
    for (const Pole& pl : poles) {
        const std::size_t g = pl.members.size();
        if (g < 2) continue;
        Vector b(g);
        for (std::size_t i = 0; i < g; ++i) b[i] = a.shaft[pl.members[i]];
        linalg::normalize(b);
        // Householder mapping e1 -> b; columns 1..g-1 span the complement of b
        Vector w = b;
        w[0] -= 1.0;
        const double wn = linalg::norm2(w);
        for (std::size_t c = 1; c < g; ++c) {
            Vector v(p, 0.0);
            if (wn < 1e-14) {
                v[pl.members[c] + 1] = 1.0;
            } else {
                const double f = 2.0 * w[c] / (wn * wn);
                for (std::size_t i = 0; i < g; ++i) v[pl.members[i] + 1] = -f * w[i];
                v[pl.members[c] + 1] += 1.0;
            }
            pairs.emplace_back(pl.value, v);
        }
    }

    for (std::size_t idx : deflated) {
        Vector v(p, 0.0);
        v[idx + 1] = 1.0;
        pairs.emplace_back(a.tail[idx], v);
    }

    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });

    EigResult out;
    out.values.resize(p);
    out.vectors = Matrix(p, p);
    for (std::size_t c = 0; c < p; ++c) {
        out.values[c] = pairs[c].first;
        // sign convention: largest-magnitude component positive
        const Vector& v = pairs[c].second;
        std::size_t arg = 0;
        for (std::size_t i = 1; i < p; ++i)
            if (std::fabs(v[i]) > std::fabs(v[arg])) arg = i;
        const double sgn = v[arg] < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < p; ++i) out.vectors(i, c) = sgn * v[i];
    }
    return out;
}

std::string arrowhead_to_json(const ArrowheadMatrix& a) {
    nlohmann::ordered_json j;
    j["head"] = a.head;
    j["shaft"] = a.shaft;
    j["tail"] = a.tail;
    return j.dump(2);
}

ArrowheadMatrix arrowhead_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ArrowheadMatrix a;
    a.head = j.at("head").get<double>();
    a.shaft = j.at("shaft").get<Vector>();
    a.tail = j.at("tail").get<Vector>();
    if (a.shaft.size() != a.tail.size())
        throw PreconditionError("arrowhead_from_json: shaft/tail size mismatch");
    return a;
}

std::string eig_result_to_json(const EigResult& r, bool include_vectors) {
    nlohmann::ordered_json j;
    j["eigenvalues"] = r.values;
    if (include_vectors) {
        std::vector<Vector> cols;
        for (std::size_t c = 0; c < r.vectors.cols(); ++c) {
            Vector col(r.vectors.rows());
            for (std::size_t i = 0; i < r.vectors.rows(); ++i) col[i] = r.vectors(i, c);
            cols.push_back(std::move(col));
        }
        j["eigenvectors"] = cols;
    }
    return j.dump(2);
}

}  // namespace spikepca
