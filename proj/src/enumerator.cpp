#include "selfsim/enumerator.hpp"

#include "selfsim/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace selfsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int sign_of(double x) { return (x > 0) - (x < 0); }

// How a G branch ends on each side.
enum class EndKind { Fold, PositivityLimit, Open };

struct GBranchInfo {
    EndKind lo_end = EndKind::Open;  // end with the smaller ell
    EndKind hi_end = EndKind::Open;
};

struct ForwardSample {
    double alpha = 0;
    Trajectory<4> traj;
    std::string failure;
};

struct BackwardSample {
    double ell = 0;
    std::optional<BackwardShot> shot;
    bool sign_change = false;
    std::string failure;
};

ForwardSample forward_sample(const ProfileModel& model, double alpha, double r_end, const ForwardConfig& cfg) {
    ForwardSample s;
    s.alpha = alpha;
    s.traj = integrate_from_origin(model, alpha, r_end, cfg.rel_tol, cfg.abs_tol, cfg.r_eps);
    if (s.traj.termination == Termination::SignChange) {
        std::ostringstream os;
        os << "w changes sign at r = " << s.traj.event_r;
        s.failure = os.str();
    } else if (!s.traj.ok()) {
        s.failure = "integration stopped: " + to_string(s.traj.termination);
    }
    return s;
}

BackwardSample backward_sample(const ProfileModel& model, double ell, double r_min, const BackwardConfig& cfg) {
    BackwardSample s;
    s.ell = ell;
    try {
        BackwardShot shot = shoot_from_infinity(model, ell, r_min, cfg);
        if (!shot.positive) {
            s.sign_change = true;
            s.failure = shot.diagnostic;
        } else if (!shot.ok()) {
            s.failure = shot.diagnostic;
        }
        s.shot = std::move(shot);
    } catch (const std::exception& e) {
        s.failure = e.what();
    }
    return s;
}

std::optional<MatchPoint> forward_point(const ForwardSample& s, double r0) {
    if (!s.traj.covers(r0)) return std::nullopt;
    const auto y = s.traj.at(r0);
    return MatchPoint{s.alpha, y[0], y[1], y[2], y[3]};
}

std::optional<MatchPoint> backward_point(const ProfileModel& model, const BackwardSample& s, double r0) {
    if (!s.shot || s.shot->r_min() > r0) return std::nullopt;
    const auto y = s.shot->at(model, r0);
    if (!(y[0] > 0)) return std::nullopt;
    return MatchPoint{s.ell, y[0], y[1], y[2], y[3]};
}

// Points in parameter order with a flag telling whether a failed grid point
// precedes them; produces monotone-zeta branches.
std::vector<CurveBranch> split_branches(const std::vector<MatchPoint>& pts, const std::vector<bool>& gap_before,
                                        const std::vector<bool>& is_fold) {
    std::vector<CurveBranch> out;
    CurveBranch cur;
    int dir = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& pt = pts[i];
        bool split = gap_before[i];
        if (!split && !cur.points.empty()) {
            const auto& prev = cur.points.back();
            const int step_dir = sign_of(pt.zeta - prev.zeta);
            if (step_dir == 0 || (dir != 0 && step_dir != dir)) split = true;
            if (!split && !is_fold[i] && !is_fold[i - 1] && sign_of(pt.dzeta) != sign_of(prev.dzeta)) split = true;
            if (!split) dir = step_dir;
        }
        if (split && !cur.points.empty()) {
            const bool share = !gap_before[i] && is_fold[i - 1];
            out.push_back(cur);
            cur.points.clear();
            dir = 0;
            if (share) {
                cur.points.push_back(out.back().points.back());
                dir = sign_of(pt.zeta - cur.points.back().zeta);
            }
        }
        cur.points.push_back(pt);
        if (is_fold[i] && cur.points.size() > 1) {
            // A fold closes the branch; the next one starts from it.
            out.push_back(cur);
            cur.points.assign(1, pt);
            dir = 0;
        }
    }
    if (cur.points.size() > 1 || (cur.points.size() == 1 && (out.empty() || out.back().points.back().param !=
                                                                                   cur.points.front().param))) {
        out.push_back(cur);
    }
    return out;
}

CurveTable table_from_forward(const std::vector<ForwardSample>& samples, double r0) {
    CurveTable t;
    t.kind = CurveKind::F;
    t.r0 = r0;
    std::vector<bool> gap, fold;
    bool pending_gap = false;
    for (const auto& s : samples) {
        auto pt = forward_point(s, r0);
        if (!pt) {
            t.failures.emplace_back(s.alpha, s.failure.empty() ? "shot did not reach r0" : s.failure);
            pending_gap = true;
            continue;
        }
        t.points.push_back(*pt);
        gap.push_back(pending_gap);
        fold.push_back(false);
        pending_gap = false;
    }
    t.branches = split_branches(t.points, gap, fold);
    return t;
}

// u_ell(r0) changes sign between a and b: locate the fold by Illinois on ell.
std::optional<MatchPoint> locate_fold(const ProfileModel& model, const MatchPoint& a, const MatchPoint& b,
                                      double r0, const BackwardConfig& cfg) {
    double xa = a.param, xb = b.param, fa = a.dzeta, fb = b.dzeta;
    std::optional<MatchPoint> best;
    int side = 0;
    for (int it = 0; it < 60 && std::abs(xb - xa) > 1e-13 * std::abs(xb); ++it) {
        const double x = (xa * fb - xb * fa) / (fb - fa);
        auto s = backward_sample(model, x, r0, cfg);
        auto pt = backward_point(model, s, r0);
        if (!pt) return best;
        best = pt;
        const double f = pt->dzeta;
        if (f == 0) break;
        if (sign_of(f) == sign_of(fa)) {
            xa = x;
            fa = f;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            xb = x;
            fb = f;
            if (side == 1) fa *= 0.5;
            side = 1;
        }
    }
    return best;
}

// Smallest ell in (bad, good) whose backward shot stays positive down to r0.
std::optional<MatchPoint> locate_positivity_limit(const ProfileModel& model, double bad, const MatchPoint& good,
                                                  double r0, const BackwardConfig& cfg) {
    double lo = bad, hi = good.param;
    std::optional<MatchPoint> best = good;
    for (int it = 0; it < 36; ++it) {
        const double mid = 0.5 * (lo + hi);
        auto s = backward_sample(model, mid, r0, cfg);
        auto pt = backward_point(model, s, r0);
        if (pt) {
            best = pt;
            hi = mid;
        } else if (s.sign_change) {
            lo = mid;
        } else {
            break;
        }
    }
    return best;
}

struct GTable {
    CurveTable table;
    std::vector<GBranchInfo> info;
};

GTable table_from_backward(const ProfileModel& model, const std::vector<BackwardSample>& samples, double r0,
                           const BackwardConfig& cfg, bool refine) {
    GTable g;
    auto& t = g.table;
    t.kind = CurveKind::G;
    t.r0 = r0;
    std::vector<MatchPoint> pts;
    std::vector<bool> gap, fold, limit;
    bool pending_gap = false;
    const BackwardSample* prev_failed = nullptr;
    for (const auto& s : samples) {
        auto pt = backward_point(model, s, r0);
        if (!pt) {
            t.failures.emplace_back(s.ell, s.failure.empty() ? "shot did not reach r0" : s.failure);
            pending_gap = true;
            prev_failed = &s;
            continue;
        }
        if (refine && pending_gap && prev_failed && prev_failed->sign_change) {
            if (auto lim = locate_positivity_limit(model, prev_failed->ell, *pt, r0, cfg);
                lim && lim->param < pt->param) {
                pts.push_back(*lim);
                gap.push_back(true);
                fold.push_back(false);
                limit.push_back(true);
                pending_gap = false;
            }
        }
        if (refine && !pending_gap && !pts.empty() && sign_of(pts.back().dzeta) * sign_of(pt->dzeta) < 0) {
            if (auto f = locate_fold(model, pts.back(), *pt, r0, cfg);
                f && f->param > pts.back().param && f->param < pt->param) {
                pts.push_back(*f);
                gap.push_back(false);
                fold.push_back(true);
                limit.push_back(false);
            }
        }
        pts.push_back(*pt);
        gap.push_back(pending_gap);
        fold.push_back(false);
        limit.push_back(false);
        pending_gap = false;
        prev_failed = nullptr;
    }
    t.points = pts;
    t.branches = split_branches(pts, gap, fold);
    for (const auto& b : t.branches) {
        GBranchInfo info;
        auto kind_of = [&](const MatchPoint& m) {
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (pts[i].param == m.param) {
                    if (fold[i]) return EndKind::Fold;
                    if (limit[i]) return EndKind::PositivityLimit;
                }
            }
            return EndKind::Open;
        };
        info.lo_end = kind_of(b.points.front());
        info.hi_end = kind_of(b.points.back());
        g.info.push_back(info);
    }
    return g;
}

// Cubic Hermite data of zeta(ell), slope(ell) on one branch: invert zeta.
struct HermiteInverse {
    double ell = 0;
    double slope = 0;
};

HermiteInverse hermite_invert(const CurveBranch& br, double zeta) {
    const auto& p = br.points;
    if (p.size() == 1) return {p[0].param, p[0].slope};
    const bool up = p.back().zeta > p.front().zeta;
    std::size_t j = 0;
    while (j + 2 < p.size() && (up ? p[j + 1].zeta < zeta : p[j + 1].zeta > zeta)) ++j;
    const auto& a = p[j];
    const auto& b = p[j + 1];
    const double h = b.param - a.param;
    auto basis = [&](double t, double fa, double da, double fb, double db) {
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * fa + (t3 - 2 * t2 + t) * h * da + (-2 * t3 + 3 * t2) * fb +
               (t3 - t2) * h * db;
    };
    auto dbasis = [&](double t, double fa, double da, double fb, double db) {
        const double t2 = t * t;
        return ((6 * t2 - 6 * t) * fa + (3 * t2 - 4 * t + 1) * h * da + (-6 * t2 + 6 * t) * fb +
                (3 * t2 - 2 * t) * h * db) /
               h;
    };
    double t = (zeta - a.zeta) / (b.zeta - a.zeta);
    t = std::clamp(t, 0.0, 1.0);
    for (int it = 0; it < 30; ++it) {
        const double f = basis(t, a.zeta, a.dzeta, b.zeta, b.dzeta) - zeta;
        const double df = dbasis(t, a.zeta, a.dzeta, b.zeta, b.dzeta);
        if (df == 0) break;
        const double nt = std::clamp(t - f / (df * h), 0.0, 1.0);
        if (std::abs(nt - t) < 1e-15) {
            t = nt;
            break;
        }
        t = nt;
    }
    return {a.param + t * h, basis(t, a.slope, a.dslope, b.slope, b.dslope)};
}

// Exact zeta inversion on a G branch by Newton in ell with u_ell.
std::optional<MatchPoint> invert_G(const ProfileModel& model, const CurveBranch& br, double zeta, double r0,
                                   const BackwardConfig& cfg) {
    double ell = hermite_invert(br, zeta).ell;
    double lo = std::min(br.points.front().param, br.points.back().param);
    double hi = std::max(br.points.front().param, br.points.back().param);
    std::optional<MatchPoint> pt;
    for (int it = 0; it < 20; ++it) {
        auto s = backward_sample(model, ell, r0, cfg);
        pt = backward_point(model, s, r0);
        if (!pt || pt->dzeta == 0) return std::nullopt;
        const double d = (pt->zeta - zeta) / pt->dzeta;
        ell = std::clamp(ell - d, lo, hi);
        if (std::abs(pt->zeta - zeta) < 1e-13 * std::max(1.0, std::abs(zeta))) return pt;
    }
    return pt;
}

double mismatch(const MatchPoint& f, const HermiteInverse& g) { return f.slope - g.slope; }

}  // namespace

double CurveBranch::zeta_min() const {
    return std::min(points.front().zeta, points.back().zeta);
}

double CurveBranch::zeta_max() const {
    return std::max(points.front().zeta, points.back().zeta);
}

MatchPoint CurveBranch::interpolate(double zeta) const {
    if (points.size() == 1) return points[0];
    const bool up = points.back().zeta > points.front().zeta;
    std::size_t j = 0;
    while (j + 2 < points.size() && (up ? points[j + 1].zeta < zeta : points[j + 1].zeta > zeta)) ++j;
    const auto& a = points[j];
    const auto& b = points[j + 1];
    const double t = (zeta - a.zeta) / (b.zeta - a.zeta);
    MatchPoint m;
    m.zeta = zeta;
    m.param = a.param + t * (b.param - a.param);
    m.slope = a.slope + t * (b.slope - a.slope);
    m.dzeta = a.dzeta + t * (b.dzeta - a.dzeta);
    m.dslope = a.dslope + t * (b.dslope - a.dslope);
    return m;
}

std::vector<double> geometric_alpha_grid(double kappa, double alpha_max, int per_octave) {
    if (per_octave < 1) throw std::invalid_argument("alpha grid needs at least one point per octave");
    std::vector<double> g;
    for (int k = 0;; ++k) {
        const double a = kappa * std::exp2(static_cast<double>(k) / per_octave);
        if (a > alpha_max * (1 + 1e-12)) break;
        g.push_back(a);
    }
    return g;
}

CurveTable build_F(const ProfileModel& model, const std::vector<double>& alpha_grid, double r0,
                   const ForwardConfig& cfg, int threads) {
    std::vector<ForwardSample> samples(alpha_grid.size());
    parallel_for(alpha_grid.size(), threads,
                 [&](std::size_t i) { samples[i] = forward_sample(model, alpha_grid[i], r0, cfg); });
    return table_from_forward(samples, r0);
}

CurveTable build_G(const ProfileModel& model, const std::vector<double>& ell_grid, double r0,
                   const BackwardConfig& cfg, int threads) {
    std::vector<BackwardSample> samples(ell_grid.size());
    parallel_for(ell_grid.size(), threads,
                 [&](std::size_t i) { samples[i] = backward_sample(model, ell_grid[i], r0, cfg); });
    return table_from_backward(model, samples, r0, cfg, true).table;
}

std::optional<MatchSolution> polish_match(const ProfileModel& model, double r0, double alpha, double ell,
                                          const SearchConfig& cfg) {
    auto eval = [&](double a, double l) -> std::optional<std::pair<MatchPoint, MatchPoint>> {
        if (!(a > 0 && l > 0)) return std::nullopt;
        auto fs = forward_sample(model, a, r0, cfg.forward);
        auto fp = forward_point(fs, r0);
        if (!fp) return std::nullopt;
        auto bs = backward_sample(model, l, r0, cfg.backward);
        auto bp = backward_point(model, bs, r0);
        if (!bp) return std::nullopt;
        return std::make_pair(*fp, *bp);
    };
    auto norm = [](const MatchPoint& f, const MatchPoint& g) {
        return std::max(std::abs(f.zeta - g.zeta), std::abs(f.slope - g.slope));
    };
    auto cur = eval(alpha, ell);
    if (!cur) return std::nullopt;
    double res = norm(cur->first, cur->second);
    auto solution = [&](int it) {
        const auto& f = cur->first;
        return MatchSolution{alpha, ell, f.zeta, f.slope, res, it, cfg.polish_tol / std::abs(f.dzeta)};
    };
    int extra = 0;
    for (int it = 0; it < cfg.max_polish_iters; ++it) {
        const auto& [f, g] = *cur;
        // Below tolerance, keep iterating only while the residual still drops.
        if (res < cfg.polish_tol && (extra++ >= 3 || res == 0)) return solution(it);
        // [w_alpha, -u_ell; w_alpha_r, -u_ell_r] (da, dl) = -(w - u, w_r - u_r)
        const double a11 = f.dzeta, a12 = -g.dzeta, a21 = f.dslope, a22 = -g.dslope;
        const double det = a11 * a22 - a12 * a21;
        if (det == 0 || !std::isfinite(det)) return std::nullopt;
        const double r1 = -(f.zeta - g.zeta), r2 = -(f.slope - g.slope);
        const double da = (r1 * a22 - a12 * r2) / det;
        const double dl = (a11 * r2 - a21 * r1) / det;
        double t = 1;
        bool accepted = false;
        for (int k = 0; k < 12; ++k, t *= 0.5) {
            const double na = alpha + t * da, nl = ell + t * dl;
            auto trial = eval(na, nl);
            if (!trial) continue;
            const double nres = norm(trial->first, trial->second);
            if (nres < res) {
                alpha = na;
                ell = nl;
                cur = trial;
                res = nres;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (res < cfg.polish_tol) return solution(it);
            return std::nullopt;
        }
    }
    if (res < cfg.polish_tol) return solution(cfg.max_polish_iters);
    return std::nullopt;
}

namespace {

struct Bracket {
    std::size_t branch = 0;
    MatchPoint a;
    MatchPoint b;
    double da = 0;
    double db = 0;
};

// Forward point with zeta(alpha) = target between two grid points.
std::optional<MatchPoint> forward_crossing(const ProfileModel& model, const MatchPoint& a, const MatchPoint& b,
                                           double target, double r0, const ForwardConfig& cfg) {
    double xa = a.param, xb = b.param, fa = a.zeta - target, fb = b.zeta - target;
    if (sign_of(fa) * sign_of(fb) > 0) return std::nullopt;
    std::optional<MatchPoint> best;
    int side = 0;
    for (int it = 0; it < 80; ++it) {
        const double x = (xa * fb - xb * fa) / (fb - fa);
        auto pt = forward_point(forward_sample(model, x, r0, cfg), r0);
        if (!pt) return std::nullopt;
        best = pt;
        const double f = pt->zeta - target;
        if (std::abs(f) < 1e-13 || std::abs(xb - xa) < 1e-14 * xb) break;
        if (sign_of(f) == sign_of(fa)) {
            xa = x;
            fa = f;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            xb = x;
            fb = f;
            if (side == 1) fa *= 0.5;
            side = 1;
        }
    }
    return best;
}

// D_b(alpha) = w_r(r0, alpha) - G_b(w(r0, alpha)), with exact zeta inversion.
std::optional<double> exact_mismatch(const ProfileModel& model, const CurveBranch& br, const MatchPoint& f,
                                     double r0, const BackwardConfig& cfg, double* ell_out = nullptr) {
    auto g = invert_G(model, br, f.zeta, r0, cfg);
    if (!g) return std::nullopt;
    if (ell_out) *ell_out = g->param;
    // First-order correction for the small residual zeta mismatch.
    return f.slope - (g->slope + (f.zeta - g->zeta) * g->dslope / g->dzeta);
}

// Illinois iteration on D_b(alpha) inside a bracket, returning a start for
// the two-dimensional Newton polish.
std::optional<std::pair<double, double>> illinois_start(const ProfileModel& model, const CurveBranch& br,
                                                        const Bracket& bk, double r0, const SearchConfig& cfg) {
    double xa = bk.a.param, xb = bk.b.param, fa = bk.da, fb = bk.db;
    double ell = hermite_invert(br, bk.a.zeta).ell;
    int side = 0;
    for (int it = 0; it < 100; ++it) {
        const double x = (xa * fb - xb * fa) / (fb - fa);
        auto pt = forward_point(forward_sample(model, x, r0, cfg.forward), r0);
        if (!pt || !br.contains(pt->zeta)) return std::nullopt;
        auto d = exact_mismatch(model, br, *pt, r0, cfg.backward, &ell);
        if (!d) return std::nullopt;
        if (std::abs(*d) < 1e-9 || std::abs(xb - xa) < 1e-12 * xb) return std::make_pair(x, ell);
        if (sign_of(*d) == sign_of(fa)) {
            xa = x;
            fa = *d;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            xb = x;
            fb = *d;
            if (side == 1) fa *= 0.5;
            side = 1;
        }
    }
    return std::nullopt;
}

double two_sided_error(const ProfileModel& model, const ForwardShot& fw, const BackwardShot& bw, double r0,
                       double* max_w) {
    double err = 0, wmax = 0;
    const int n = 201;
    for (int i = 0; i < n; ++i) {
        const double r = 0.5 * r0 + 1.5 * r0 * i / (n - 1);
        const double w = fw.at(model, r)[0];
        const double u = bw.at(model, r)[0];
        err = std::max(err, std::abs(w - u));
        wmax = std::max(wmax, std::abs(w));
    }
    if (max_w) *max_w = wmax;
    return err / wmax;
}

SolutionRecord kappa_record(const ProfileModel& model, double r0, const ForwardConfig& cfg) {
    SolutionRecord rec;
    rec.alpha = model.kappa();
    rec.ell = kNaN;
    rec.zeta = model.kappa();
    rec.slope = 0;
    rec.constant = true;
    rec.ell_fit = kNaN;
    rec.ell_roundtrip_error = 0;
    rec.note = "constant solution";
    ForwardConfig c = cfg;
    c.window_end = std::max(c.window_end, 2 * r0);
    rec.forward = shoot_from_origin(model, rec.alpha, c);
    return rec;
}

}  // namespace

EnumerationResult enumerate_solutions(const ProblemParams& params, const SearchConfig& cfg) {
    const ProfileModel model(params);
    EnumerationResult res;
    const double default_r0 = cfg.r0.value_or(cfg.r0_candidates.empty() ? 1.5 : cfg.r0_candidates.front());
    if (!params.supercritical()) {
        res.r0 = default_r0;
        res.records.push_back(kappa_record(model, res.r0, cfg.forward));
        return res;
    }

    res.alpha_grid = geometric_alpha_grid(model.kappa(), cfg.alpha_max, cfg.alpha_per_octave);
    for (int i = 1; i <= cfg.ell_points; ++i) {
        res.ell_grid.push_back(cfg.ell_max_factor * model.L() * i / cfg.ell_points);
    }

    std::vector<double> candidates = cfg.r0 ? std::vector<double>{*cfg.r0} : cfg.r0_candidates;
    if (candidates.empty()) throw std::invalid_argument("no matching radius candidates");
    const double r_hi = *std::max_element(candidates.begin(), candidates.end());
    const double r_lo = *std::min_element(candidates.begin(), candidates.end());

    std::vector<ForwardSample> fs(res.alpha_grid.size());
    parallel_for(fs.size(), cfg.threads,
                 [&](std::size_t i) { fs[i] = forward_sample(model, res.alpha_grid[i], r_hi, cfg.forward); });
    std::vector<BackwardSample> bs(res.ell_grid.size());
    parallel_for(bs.size(), cfg.threads,
                 [&](std::size_t i) { bs[i] = backward_sample(model, res.ell_grid[i], r_lo, cfg.backward); });

    if (cfg.r0) {
        res.r0 = *cfg.r0;
    } else {
        double best = -1;
        for (double r0 : candidates) {
            double score = std::numeric_limits<double>::infinity();
            for (const auto& s : fs) {
                if (auto pt = forward_point(s, r0)) score = std::min(score, std::abs(pt->param * pt->dzeta));
            }
            for (const auto& s : bs) {
                if (auto pt = backward_point(model, s, r0)) score = std::min(score, std::abs(pt->param * pt->dzeta));
            }
            if (!std::isfinite(score)) score = 0;
            res.r0_scores.emplace_back(r0, score);
            if (score > best) {
                best = score;
                res.r0 = r0;
            }
        }
    }
    const double r0 = res.r0;

    res.F = table_from_forward(fs, r0);
    auto gt = table_from_backward(model, bs, r0, cfg.backward, true);
    res.G = gt.table;

    res.records.push_back(kappa_record(model, r0, cfg.forward));

    for (const auto& [alpha, why] : res.F.failures) {
        res.unresolved.push_back({alpha, alpha, "forward shot: " + why});
    }

    // Consecutive grid points with successful forward shots.
    std::vector<std::pair<MatchPoint, MatchPoint>> intervals;
    {
        for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
            auto a = forward_point(fs[i], r0);
            auto b = forward_point(fs[i + 1], r0);
            if (a && b) intervals.emplace_back(*a, *b);
            else if (a || b) {
                res.unresolved.push_back({res.alpha_grid[i], res.alpha_grid[i + 1],
                                          "forward shot does not reach r0 at one end"});
            }
        }
    }

    std::vector<Bracket> brackets;
    for (std::size_t b = 0; b < res.G.branches.size(); ++b) {
        const auto& br = res.G.branches[b];
        if (br.points.size() < 2) continue;
        const auto& info = gt.info[b];
        // The branch end reached by leaving through zeta_min or zeta_max.
        const bool lo_is_front = br.points.front().zeta < br.points.back().zeta;
        auto end_kind = [&](bool at_zeta_min) {
            const bool front = at_zeta_min == lo_is_front;
            return front ? info.lo_end : info.hi_end;
        };
        for (const auto& [fa, fb] : intervals) {
            const bool ina = br.contains(fa.zeta);
            const bool inb = br.contains(fb.zeta);
            if (!ina && !inb) {
                const bool same_side = (fa.zeta < br.zeta_min()) == (fb.zeta < br.zeta_min());
                if (same_side) continue;
            }
            // Clip the interval at the alpha values where zeta reaches the
            // branch ends, assuming zeta monotone between grid points.
            MatchPoint a = fa, b2 = fb;
            bool clipped_ok = true;
            for (int side = 0; side < 2 && clipped_ok; ++side) {
                const MatchPoint& out = side == 0 ? fa : fb;
                if (br.contains(out.zeta)) continue;
                const bool exit_low = out.zeta < br.zeta_min();
                const double target = exit_low ? br.zeta_min() : br.zeta_max();
                auto cross = forward_crossing(model, fa, fb, target, r0, cfg.forward);
                if (!cross) {
                    res.unresolved.push_back({fa.param, fb.param, "could not locate the edge of a G branch"});
                    clipped_ok = false;
                    break;
                }
                if (end_kind(exit_low) == EndKind::Open) {
                    std::ostringstream os;
                    os << "zeta leaves the computed G range at ell = "
                       << (exit_low == lo_is_front ? br.points.front().param : br.points.back().param);
                    res.unresolved.push_back(
                        {std::min(cross->param, out.param), std::max(cross->param, out.param), os.str()});
                }
                MatchPoint edge = *cross;
                edge.zeta = std::clamp(edge.zeta, br.zeta_min(), br.zeta_max());
                (side == 0 ? a : b2) = edge;
            }
            if (!clipped_ok) continue;
            const auto ga = hermite_invert(br, a.zeta);
            const auto gb = hermite_invert(br, b2.zeta);
            double da = mismatch(a, ga), db = mismatch(b2, gb);
            // Near-zero interpolated mismatches are re-evaluated with exact
            // inversion before trusting their sign.
            const double scale = std::max({1.0, std::abs(a.slope), std::abs(b2.slope)});
            if (std::abs(da) < 1e-4 * scale) {
                if (auto d = exact_mismatch(model, br, a, r0, cfg.backward)) da = *d;
            }
            if (std::abs(db) < 1e-4 * scale) {
                if (auto d = exact_mismatch(model, br, b2, r0, cfg.backward)) db = *d;
            }
            if (sign_of(da) * sign_of(db) <= 0 && !(da == 0 && db == 0)) {
                if (std::max(std::abs(da), std::abs(db)) < cfg.mismatch_floor * scale) {
                    res.unresolved.push_back({a.param, b2.param, "sign change of F - G below numerical resolution"});
                } else {
                    brackets.push_back({b, a, b2, da, db});
                }
            }
        }
    }

    std::vector<SolutionRecord> found;
    for (const auto& bk : brackets) {
        const auto& br = res.G.branches[bk.branch];
        std::optional<MatchSolution> sol;
        // Secant guess, then two-dimensional Newton; Illinois on the
        // mismatch when Newton leaves the bracket.
        {
            const double t = bk.da / (bk.da - bk.db);
            const double alpha0 = bk.a.param + t * (bk.b.param - bk.a.param);
            const double zeta0 = bk.a.zeta + t * (bk.b.zeta - bk.a.zeta);
            const double ell0 = hermite_invert(br, std::clamp(zeta0, br.zeta_min(), br.zeta_max())).ell;
            sol = polish_match(model, r0, alpha0, ell0, cfg);
        }
        const double amin = std::min(bk.a.param, bk.b.param), amax = std::max(bk.a.param, bk.b.param);
        const double lmin = std::min(br.points.front().param, br.points.back().param);
        const double lmax = std::max(br.points.front().param, br.points.back().param);
        auto inside = [&](const MatchSolution& s) {
            return s.alpha >= amin * (1 - 1e-9) && s.alpha <= amax * (1 + 1e-9) && s.ell >= lmin * (1 - 1e-9) &&
                   s.ell <= lmax * (1 + 1e-9);
        };
        if (!sol || !inside(*sol)) {
            sol.reset();
            if (auto start = illinois_start(model, br, bk, r0, cfg)) {
                sol = polish_match(model, r0, start->first, start->second, cfg);
                if (sol && !inside(*sol)) sol.reset();
            }
        }
        if (!sol) {
            res.unresolved.push_back({amin, amax, "sign change of F - G could not be polished"});
            continue;
        }
        bool duplicate = false;
        for (const auto& r : found) {
            if (std::abs(r.alpha - sol->alpha) < 1e-8 * sol->alpha) duplicate = true;
        }
        if (duplicate) continue;

        SolutionRecord rec;
        rec.alpha = sol->alpha;
        rec.ell = sol->ell;
        rec.zeta = sol->zeta;
        rec.slope = sol->slope;
        rec.residual = sol->residual;
        rec.alpha_tolerance = sol->alpha_tolerance;
        ForwardConfig fc = cfg.forward;
        fc.window_end = std::max(fc.window_end, 2 * r0);
        rec.forward = shoot_from_origin(model, rec.alpha, fc);
        std::ostringstream note;
        try {
            rec.backward = shoot_from_infinity(model, rec.ell, 0.5 * r0, cfg.backward);
        } catch (const std::exception& e) {
            res.unresolved.push_back({amin, amax, std::string("validation backward shot failed: ") + e.what()});
            continue;
        }
        const bool covered = rec.forward.profile.covers(2 * r0) && rec.backward->r_min() <= 0.5 * r0 &&
                             rec.backward->positive;
        rec.two_sided_error = covered ? two_sided_error(model, rec.forward, *rec.backward, r0, nullptr) : kNaN;
        const bool fit_usable = rec.forward.fit && rec.forward.fit->residual <= cfg.fit_residual_max;
        if (fit_usable) {
            rec.ell_fit = rec.forward.fit->ell;
            rec.ell_roundtrip_error = std::abs(rec.ell_fit - rec.ell) / rec.ell;
        } else {
            rec.ell_fit = kNaN;
            rec.ell_roundtrip_error = kNaN;
        }
        const bool two_sided_ok = covered && rec.two_sided_error <= cfg.two_sided_tol;
        const bool ell_ok = !fit_usable || rec.ell_roundtrip_error <= cfg.ell_roundtrip_tol;
        if (!two_sided_ok || !ell_ok) {
            std::ostringstream os;
            os << "match at alpha = " << rec.alpha << " failed validation (two-sided error "
               << rec.two_sided_error << ", ell round-trip " << rec.ell_roundtrip_error << ")";
            res.unresolved.push_back({amin, amax, os.str()});
            continue;
        }
        note << "G branch " << bk.branch << ", Newton residual " << sol->residual;
        if (!fit_usable) note << "; no asymptotic fit within the forward reliability horizon";
        rec.note = note.str();
        found.push_back(std::move(rec));
    }
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.alpha < y.alpha; });
    for (auto& r : found) res.records.push_back(std::move(r));
    std::sort(res.unresolved.begin(), res.unresolved.end(),
              [](const auto& x, const auto& y) { return x.alpha_lo < y.alpha_lo; });
    return res;
}

double curve_derivative_F1(const ProfileModel& model, double alpha, double r0, const ForwardConfig& cfg) {
    auto s = forward_sample(model, alpha, r0, cfg);
    auto pt = forward_point(s, r0);
    if (!pt) throw std::runtime_error("forward shot does not reach r0: " + s.failure);
    // A zero of w_alpha at r0 is simple (w_alpha_r != 0 there), so compare the
    // two; their absolute size decays like a power of alpha.
    if (std::abs(pt->dzeta) <= 1e-12 * r0 * std::abs(pt->dslope)) {
        throw std::domain_error("w_alpha(r0) vanishes: branch point of the zeta parameterization");
    }
    return pt->dslope / pt->dzeta;
}

RecordAsymptotics record_asymptotics(const ProfileModel& model, const SolutionRecord& record, double r0,
                                     double r_hi) {
    if (record.constant || !record.backward) {
        throw std::invalid_argument("asymptotics need a nonconstant record with a backward shot");
    }
    if (!(r_hi >= 4 * r0)) throw std::invalid_argument("asymptotic fit needs r_hi >= 4 r0");
    const BackwardShot& back = *record.backward;
    auto w = [&](double r) { return back.at(model, r)[0]; };
    RecordAsymptotics out;
    out.inner = fit_asymptotics(model, w, 0.25 * r_hi, 0.5 * r_hi);
    out.outer = fit_asymptotics(model, w, 0.5 * r_hi, r_hi);
    out.ell_window_change = std::abs(out.outer.ell - out.inner.ell) / out.outer.ell;
    out.c_predicted = std::pow(out.outer.ell, model.pm1()) - model.L_pm1();
    out.c_error = std::abs(out.outer.c - out.c_predicted) / std::max(1.0, std::abs(out.outer.c));
    out.log_derivative = fit_log_derivative_correction(
        model,
        [&](double r) {
            const auto y = back.at(model, r);
            return std::make_pair(y[0], y[1]);
        },
        0.25 * r_hi, r_hi);
    return out;
}

SecondDerivative curve_derivative_F2(const ProfileModel& model, double alpha, double r0, const ForwardConfig& cfg) {
    ForwardConfig c = cfg;
    c.window_end = r0;
    const ForwardShot shot = shoot_from_origin(model, alpha, c);
    if (!shot.profile.covers(r0)) throw std::runtime_error("forward shot does not reach r0: " + shot.diagnostic);
    const auto y0 = shot.at(model, r0);
    const double za = y0[2];
    if (std::abs(za) <= 1e-12 * r0 * std::abs(y0[3])) throw std::domain_error("w_alpha(r0) vanishes: branch point of the zeta parameterization");
    const double p = model.p();
    const int N = model.N();
    auto integrand = [&](double s) {
        if (s <= 0) return N == 1 ? std::pow(alpha, p - 2) / (za * za * za) : 0.0;
        const auto y = shot.at(model, s);
        const double psi = y[2] / za;
        if (psi == 0) return 0.0;
        // Log space: omega(s) underflows long before omega psi^3 does.
        const double log_mag = log_weight(N, s) - log_weight(N, r0) + (p - 2) * std::log(std::abs(y[0])) +
                               3 * std::log(std::abs(psi));
        return std::copysign(std::exp(log_mag), psi);
    };
    // Dyadic pieces toward the origin, where the integrand can approach an
    // integrable power singularity below the core scale of w.
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double integral = 0, err = 0;
    double hi = r0;
    int small_pieces = 0;
    for (int k = 0; k < 400 && small_pieces < 3; ++k) {
        double piece_err = 0;
        const double piece = GK::integrate(integrand, 0.5 * hi, hi, 15, 1e-13, &piece_err);
        integral += piece;
        err += piece_err;
        small_pieces = std::abs(piece) <= 1e-16 * std::abs(integral) ? small_pieces + 1 : 0;
        hi *= 0.5;
    }
    double tail_err = 0;
    integral += GK::integrate(integrand, 0.0, hi, 15, 1e-13, &tail_err);
    err += tail_err;
    SecondDerivative out;
    out.value = -p * (p - 1) * integral;
    out.error = p * (p - 1) * err;
    out.w_alpha_r0 = za;
    return out;
}

}  // namespace selfsim
