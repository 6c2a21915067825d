#include "curvemom/mom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "curvemom/constants.hpp"
#include "curvemom/errors.hpp"
#include "curvemom/parallel.hpp"

namespace curvemom {

namespace {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre_01(int n) {
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = 0.5 * (1.0 - t);
        w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
    std::vector<std::size_t> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) { return x[p] < x[q]; });
    std::vector<double> xs(n), ws(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = x[order[i]];
        ws[i] = w[order[i]];
    }
    return {xs, ws};
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_rule(int n) {
    static const auto g4 = gauss_legendre_01(4);
    static const auto g7 = gauss_legendre_01(7);
    static const auto g8 = gauss_legendre_01(8);
    static const auto g16 = gauss_legendre_01(16);
    switch (n) {
        case 4: return g4;
        case 7: return g7;
        case 8: return g8;
        case 16: return g16;
        default: throw std::logic_error("unsupported quadrature order");
    }
}

struct PieceGeom {
    Vec3 origin;
    Vec3 dir;
    double len = 0;
    double a = 0;
    double b = 0;
    double radius = 0;
};

PieceGeom piece_geom(const WireModel& model, const BasisPiece& p) {
    const WireSegment& s = model.segments[p.seg];
    return {s.start, s.direction(), s.length(), p.a, p.b, s.radius};
}

PieceGeom mirror_piece(const PieceGeom& p) {
    return {p.origin.mirrored(), p.dir.mirrored(), p.len, -p.a, -p.b, p.radius};
}

double axis_distance(const PieceGeom& p, const PieceGeom& q) {
    return segment_distance(p.origin, p.origin + p.dir * p.len, q.origin,
                            q.origin + q.dir * q.len);
}

// Line integral over the source piece of f_q / R with the reduced kernel,
// observation point r: closed form via asinh.
cplx static_inner(const PieceGeom& q, const Vec3& r, double* i0_out) {
    Vec3 v = r - q.origin;
    double s0 = v.dot(q.dir);
    double h2 = v.dot(v) - s0 * s0;
    if (h2 < 0) h2 = 0;
    h2 += q.radius * q.radius;
    double h = std::sqrt(h2);
    double u1 = -s0;
    double u2 = q.len - s0;
    double i0 = std::asinh(u2 / h) - std::asinh(u1 / h);
    double i1 = std::sqrt(u2 * u2 + h2) - std::sqrt(u1 * u1 + h2);
    *i0_out = i0;
    return q.a * i0 + (q.b / q.len) * (i1 + s0 * i0);
}

struct BlockTerms {
    cplx A{0, 0};
    cplx B{0, 0};
};

// Static 1/R part with outer Gauss over p and analytic inner over q.
BlockTerms static_half(const PieceGeom& p, const PieceGeom& q) {
    const auto& [xo, wo] = gauss_rule(16);
    BlockTerms t;
    double asum_re = 0, bsum = 0;
    for (std::size_t i = 0; i < xo.size(); ++i) {
        Vec3 r = p.origin + p.dir * (p.len * xo[i]);
        double i0 = 0;
        cplx j = static_inner(q, r, &i0);
        asum_re += wo[i] * (p.a + p.b * xo[i]) * j.real();
        bsum += wo[i] * i0;
    }
    t.A = p.len * asum_re;
    t.B = (p.b * q.b / q.len) * bsum;
    return t;
}

BlockTerms block_terms(const PieceGeom& p, const PieceGeom& q, double k) {
    double dd = p.dir.dot(q.dir);
    double lm = std::max(p.len, q.len);
    double dmin = axis_distance(p, q);
    BlockTerms t;
    if (dmin > 2.0 * lm) {
        int n = (dmin < 4.0 * lm) ? 7 : 4;
        const auto& [x, w] = gauss_rule(n);
        cplx asum{0, 0}, bsum{0, 0};
        for (std::size_t i = 0; i < x.size(); ++i) {
            Vec3 rp = p.origin + p.dir * (p.len * x[i]);
            double fp = p.a + p.b * x[i];
            for (std::size_t j = 0; j < x.size(); ++j) {
                Vec3 rq = q.origin + q.dir * (q.len * x[j]);
                Vec3 d = rp - rq;
                double R = std::sqrt(d.dot(d) + q.radius * q.radius);
                cplx g = std::exp(cplx(0, -k * R)) / R;
                cplx ww = w[i] * w[j] * g;
                asum += ww * fp * (q.a + q.b * x[j]);
                bsum += ww;
            }
        }
        t.A = dd * p.len * q.len * asum;
        t.B = p.b * q.b * bsum;
        return t;
    }
    const auto& [x, w] = gauss_rule(8);
    cplx asum{0, 0}, bsum{0, 0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        Vec3 rp = p.origin + p.dir * (p.len * x[i]);
        double fp = p.a + p.b * x[i];
        for (std::size_t j = 0; j < x.size(); ++j) {
            Vec3 rq = q.origin + q.dir * (q.len * x[j]);
            Vec3 d = rp - rq;
            double R = std::sqrt(d.dot(d) + q.radius * q.radius);
            cplx gs = (std::exp(cplx(0, -k * R)) - 1.0) / R;
            cplx ww = w[i] * w[j] * gs;
            asum += ww * fp * (q.a + q.b * x[j]);
            bsum += ww;
        }
    }
    BlockTerms pq = static_half(p, q);
    BlockTerms qp = static_half(q, p);
    t.A = dd * (p.len * q.len * asum + 0.5 * (pq.A + qp.A));
    t.B = p.b * q.b * bsum + 0.5 * (pq.B + qp.B);
    return t;
}

void check_kernel_validity(const WireModel& model, double k) {
    double lam = 2.0 * kPi / k;
    for (std::size_t i = 0; i < model.segments.size(); ++i) {
        const WireSegment& s = model.segments[i];
        double len = s.length();
        if (len < 2.0 * s.radius)
            throw KernelValidityError("segment " + std::to_string(i) + " length " +
                                      std::to_string(len) + " m is below twice its radius");
        if (len > lam / 10.0)
            throw KernelValidityError("segment " + std::to_string(i) + " length " +
                                      std::to_string(len) + " m exceeds lambda/10 = " +
                                      std::to_string(lam / 10.0) + " m");
    }
}

Eigen::MatrixXcd fill_impl(const WireModel& model, const BasisSet& bases, Frequency f,
                           bool threaded) {
    if (f.hz <= 0) throw ConfigError("frequency must be positive");
    double k = wavenumber(f.hz);
    check_kernel_validity(model, k);

    const std::size_t n = bases.bases.size();
    bool image = bases.ground == GroundModel::InfinitePEC;
    std::vector<std::vector<PieceGeom>> geo(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const BasisPiece& p : bases.bases[i].pieces) geo[i].push_back(piece_geom(model, p));

    Eigen::MatrixXcd Z(n, n);
    const cplx pref = cplx(0, 1) * kEta0 / (4.0 * kPi);
    auto fill_row = [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx asum{0, 0}, bsum{0, 0};
            for (const PieceGeom& p : geo[i]) {
                for (const PieceGeom& q : geo[j]) {
                    BlockTerms t = block_terms(p, q, k);
                    asum += t.A;
                    bsum += t.B;
                    if (image) {
                        BlockTerms ti = block_terms(p, mirror_piece(q), k);
                        asum += ti.A;
                        bsum += ti.B;
                    }
                }
            }
            Z(i, j) = pref * (k * asum - bsum / k);
        }
    };
    if (threaded)
        parallel_for(n, fill_row);
    else
        for (std::size_t i = 0; i < n; ++i) fill_row(i);
    return Z;
}

std::size_t gap_node(const WireModel& model, const FeedPort& port) {
    if (port.segment_index >= model.segments.size())
        throw ConfigError("feed port references segment " + std::to_string(port.segment_index) +
                          " of " + std::to_string(model.segments.size()));
    return model.start_node(port.segment_index);
}

}  // namespace

const std::vector<double>& gauss_nodes(int n) { return gauss_rule(n).first; }
const std::vector<double>& gauss_weights(int n) { return gauss_rule(n).second; }

BasisSet build_bases(const WireModel& model, GroundModel ground) {
    BasisSet set;
    set.ground = ground;
    set.node_basis.assign(model.node_count, -1);

    struct Incidence {
        std::size_t seg;
        bool at_start;
    };
    std::vector<std::vector<Incidence>> inc(model.node_count);
    std::vector<Vec3> pos(model.node_count);
    for (std::size_t s = 0; s < model.segments.size(); ++s) {
        std::size_t ns = model.start_node(s);
        std::size_t ne = model.end_node(s);
        inc[ns].push_back({s, true});
        inc[ne].push_back({s, false});
        pos[ns] = model.segments[s].start;
        pos[ne] = model.segments[s].end;
    }

    for (std::size_t node = 0; node < model.node_count; ++node) {
        const auto& at = inc[node];
        if (at.size() > 2)
            throw GeometryError("node " + std::to_string(node) +
                                " joins " + std::to_string(at.size()) +
                                " segments; junctions beyond two-wire chains are not supported");
        BasisFunction bf;
        bf.node = node;
        if (at.size() == 2) {
            if (at[0].at_start == at[1].at_start)
                throw GeometryError("node " + std::to_string(node) +
                                    " is not a head-to-tail chain joint");
            const Incidence& into = at[0].at_start ? at[1] : at[0];
            const Incidence& outof = at[0].at_start ? at[0] : at[1];
            bf.pieces.push_back({into.seg, 0.0, 1.0});
            bf.pieces.push_back({outof.seg, 1.0, -1.0});
        } else if (ground == GroundModel::InfinitePEC && std::abs(pos[node].z) <= 1e-9) {
            if (at[0].at_start)
                bf.pieces.push_back({at[0].seg, 1.0, -1.0});
            else
                bf.pieces.push_back({at[0].seg, 0.0, 1.0});
        } else {
            continue;
        }
        set.node_basis[node] = static_cast<std::ptrdiff_t>(set.bases.size());
        set.bases.push_back(std::move(bf));
    }
    return set;
}

Eigen::MatrixXcd fill_impedance_matrix(const WireModel& model, const BasisSet& bases,
                                       Frequency f) {
    return fill_impl(model, bases, f, true);
}

Eigen::VectorXcd excitation_vector(const WireModel& model, const BasisSet& bases) {
    if (model.ports.empty()) throw ConfigError("model has no feed ports");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(bases.bases.size());
    for (const FeedPort& port : model.ports) {
        std::size_t node = gap_node(model, port);
        std::ptrdiff_t idx = bases.node_basis[node];
        if (idx < 0)
            throw ConfigError("feed gap at node " + std::to_string(node) +
                              " has no basis function; feed an interior or grounded node");
        v[idx] += port.gap_voltage;
    }
    return v;
}

double SolveResult::input_power() const {
    double p = 0;
    for (std::size_t i = 0; i < port_voltages.size(); ++i)
        p += 0.5 * (port_voltages[i] * std::conj(port_currents[i])).real();
    return p;
}

SolveResult solve_currents(const Eigen::MatrixXcd& Z, const WireModel& model,
                           const BasisSet& bases, Frequency f) {
    const std::size_t n = bases.bases.size();
    if (n == 0) throw SolverError("model yields no basis functions");
    if (static_cast<std::size_t>(Z.rows()) != n || static_cast<std::size_t>(Z.cols()) != n)
        throw SolverError("impedance matrix does not match basis count");

    Eigen::VectorXcd v = excitation_vector(model, bases);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Z);
    double rc = lu.rcond();
    if (!(rc > 1e-12))
        throw SingularSystemError("impedance matrix condition estimate " +
                                  std::to_string(1.0 / std::max(rc, 1e-300)) + " exceeds 1e12");
    Eigen::VectorXcd x = lu.solve(v);
    x += lu.solve(v - Z * x);
    double rel = (Z * x - v).norm() / v.norm();
    if (!(rel < 1e-10))
        throw SolverError("solve residual " + std::to_string(rel) + " exceeds 1e-10");

    SolveResult out;
    out.frequency = f;
    out.currents.assign(x.data(), x.data() + n);
    for (const FeedPort& port : model.ports) {
        std::size_t node = gap_node(model, port);
        cplx ip = x[bases.node_basis[node]];
        if (std::abs(ip) == 0) throw SolverError("zero port current");
        cplx zp = port.gap_voltage / ip;
        if (model.ports.size() == 1 && zp.real() < -0.01)
            throw SolverError("non-passive port impedance Re(Z) = " + std::to_string(zp.real()));
        out.port_voltages.push_back(port.gap_voltage);
        out.port_currents.push_back(ip);
        out.port_impedances.push_back(zp);
    }
    if (out.input_power() < -1e-9)
        throw SolverError("non-passive solve: negative total input power");
    return out;
}

SolveResult solve(const WireModel& model, Frequency f, GroundModel ground) {
    BasisSet bases = build_bases(model, ground);
    Eigen::MatrixXcd Z = fill_impedance_matrix(model, bases, f);
    return solve_currents(Z, model, bases, f);
}

std::vector<SweepPoint> input_impedance_sweep(const WireModel& model,
                                              const std::vector<double>& freqs_hz,
                                              GroundModel ground) {
    BasisSet bases = build_bases(model, ground);
    std::vector<SweepPoint> out(freqs_hz.size());
    parallel_for(freqs_hz.size(), [&](std::size_t i) {
        SweepPoint& pt = out[i];
        pt.freq_hz = freqs_hz[i];
        try {
            Eigen::MatrixXcd Z = fill_impl(model, bases, Frequency{freqs_hz[i]}, false);
            SolveResult r = solve_currents(Z, model, bases, Frequency{freqs_hz[i]});
            pt.port_z = std::move(r.port_impedances);
            pt.ok = true;
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.error = e.what();
        }
    });
    return out;
}

}  // namespace curvemom
