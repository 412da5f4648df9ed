#include "ddecay/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>

namespace dd {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
using G7 = boost::math::quadrature::gauss<double, 7>;
using G8 = boost::math::quadrature::gauss<double, 8>;

// Kronrod abscissas 0..7 (0 is the centre); Gauss nodes sit at the even indices
struct Tables {
    std::vector<double> xk, wk, wg;
    Tables() {
        xk.assign(GK::abscissa().begin(), GK::abscissa().end());
        wk.assign(GK::weights().begin(), GK::weights().end());
        wg.assign(xk.size(), 0.0);
        const auto& gw = G7::weights();
        for (std::size_t i = 0; i < xk.size(); i += 2) wg[i] = gw[i / 2];
    }
};
const Tables& tables() {
    static const Tables t;
    return t;
}

struct Panel {
    double a, b;
    cplx k, g;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel eval_panel(const std::function<cplx(double)>& f, double a, double b) {
    const auto& T = tables();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx k = 0.0, g = 0.0;
    for (std::size_t i = 0; i < T.xk.size(); ++i) {
        if (i == 0) {
            const cplx v = f(c);
            k += T.wk[0] * v;
            g += T.wg[0] * v;
            continue;
        }
        const cplx v = f(c - h * T.xk[i]) + f(c + h * T.xk[i]);
        k += T.wk[i] * v;
        g += T.wg[i] * v;
    }
    k *= h;
    g *= h;
    return {a, b, k, g, std::abs(k - g)};
}

}  // namespace

QuadResult integrate(const std::function<cplx(double)>& f, double a, double b, const QuadOptions& opt) {
    QuadResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::priority_queue<Panel> q;
    int npan = 1;
    if (opt.max_width > 0.0) npan = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / opt.max_width)));
    for (int i = 0; i < npan; ++i) {
        const double lo = a + (b - a) * i / npan, hi = a + (b - a) * (i + 1) / npan;
        q.push(eval_panel(f, lo, hi));
    }
    res.evaluations = 15 * npan;
    auto totals = [&]() {
        cplx v = 0.0;
        double e = 0.0;
        auto copy = q;
        while (!copy.empty()) {
            v += copy.top().k;
            e += copy.top().err;
            copy.pop();
        }
        return std::make_pair(v, e);
    };
    cplx value = 0.0;
    double err = 0.0;
    {
        auto t = totals();
        value = t.first;
        err = t.second;
    }
    while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) {
        if (static_cast<int>(q.size()) >= opt.max_panels) {
            res.value = value;
            res.error = err;
            return res;
        }
        Panel p = q.top();
        q.pop();
        const double m = 0.5 * (p.a + p.b);
        Panel l = eval_panel(f, p.a, m), r = eval_panel(f, m, p.b);
        res.evaluations += 30;
        value += l.k + r.k - p.k;
        err += l.err + r.err - p.err;
        q.push(l);
        q.push(r);
        if (q.size() % 64 == 0) {
            auto t = totals();  // limit drift of the running sums
            value = t.first;
            err = t.second;
        }
    }
    auto t = totals();
    res.value = t.first;
    res.error = t.second;
    res.converged = true;
    return res;
}

namespace {

struct VPanel {
    double a, b;
    std::vector<cplx> k;
    double err;
    std::vector<std::vector<cplx>> samples;  // 15 samples, ordered as nodes
};

VPanel eval_vpanel(const VecIntegrand& f, std::size_t dim, double a, double b, bool keep) {
    const auto& T = tables();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    VPanel p{a, b, std::vector<cplx>(dim, 0.0), 0.0, {}};
    std::vector<cplx> g(dim, 0.0), v(dim);
    auto add = [&](double x, double wk, double wg) {
        f(x, v);
        for (std::size_t d = 0; d < dim; ++d) {
            p.k[d] += wk * v[d];
            g[d] += wg * v[d];
        }
        if (keep) p.samples.push_back(v);
    };
    add(c, T.wk[0], T.wg[0]);
    for (std::size_t i = 1; i < T.xk.size(); ++i) {
        add(c - h * T.xk[i], T.wk[i], T.wg[i]);
        add(c + h * T.xk[i], T.wk[i], T.wg[i]);
    }
    double e = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
        p.k[d] *= h;
        e += std::abs(p.k[d] - h * g[d]);
    }
    p.err = e;
    return p;
}

}  // namespace

VecQuadResult integrate_vec(const VecIntegrand& f, std::size_t dim, const std::vector<double>& breaks,
                            const QuadOptions& opt, bool keep_nodes) {
    VecQuadResult res;
    res.value.assign(dim, 0.0);
    std::vector<double> pts = breaks;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 2) {
        res.converged = true;
        return res;
    }
    std::vector<VPanel> panels;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        int n = 1;
        if (opt.max_width > 0.0) n = std::max(1, static_cast<int>(std::ceil((pts[i + 1] - pts[i]) / opt.max_width)));
        for (int j = 0; j < n; ++j) {
            const double lo = pts[i] + (pts[i + 1] - pts[i]) * j / n;
            const double hi = pts[i] + (pts[i + 1] - pts[i]) * (j + 1) / n;
            panels.push_back(eval_vpanel(f, dim, lo, hi, keep_nodes));
        }
    }
    // errors add across panels; refine the worst until the sum is below tolerance
    auto total_err = [&]() {
        double e = 0.0;
        for (const auto& p : panels) e += p.err;
        return e;
    };
    double err = total_err();
    while (err > opt.abs_tol && static_cast<int>(panels.size()) < opt.max_panels) {
        auto it = std::max_element(panels.begin(), panels.end(),
                                   [](const VPanel& x, const VPanel& y) { return x.err < y.err; });
        const double a = it->a, b = it->b, m = 0.5 * (a + b);
        *it = eval_vpanel(f, dim, a, m, keep_nodes);
        panels.push_back(eval_vpanel(f, dim, m, b, keep_nodes));
        err = total_err();
    }
    res.converged = err <= opt.abs_tol;
    res.error = err;
    std::sort(panels.begin(), panels.end(), [](const VPanel& x, const VPanel& y) { return x.a < y.a; });
    const auto& T = tables();
    for (const auto& p : panels) {
        for (std::size_t d = 0; d < dim; ++d) res.value[d] += p.k[d];
        if (!keep_nodes) continue;
        const double c = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
        res.nodes.push_back(c);
        res.weights.push_back(h * T.wk[0]);
        for (std::size_t i = 1; i < T.xk.size(); ++i) {
            res.nodes.push_back(c - h * T.xk[i]);
            res.weights.push_back(h * T.wk[i]);
            res.nodes.push_back(c + h * T.xk[i]);
            res.weights.push_back(h * T.wk[i]);
        }
        for (const auto& s : p.samples) res.samples.push_back(s);
    }
    return res;
}

const Rule& gauss_legendre8() {
    static const Rule r = [] {
        Rule out;
        for (std::size_t i = 0; i < G8::abscissa().size(); ++i) {
            out.x.push_back(-G8::abscissa()[i]);
            out.w.push_back(G8::weights()[i]);
            out.x.push_back(G8::abscissa()[i]);
            out.w.push_back(G8::weights()[i]);
        }
        return out;
    }();
    return r;
}

const Rule& kronrod15() {
    static const Rule r = [] {
        const auto& T = tables();
        Rule out;
        out.x.push_back(0.0);
        out.w.push_back(T.wk[0]);
        for (std::size_t i = 1; i < T.xk.size(); ++i) {
            out.x.push_back(-T.xk[i]);
            out.w.push_back(T.wk[i]);
            out.x.push_back(T.xk[i]);
            out.w.push_back(T.wk[i]);
        }
        return out;
    }();
    return r;
}

}  // namespace dd
