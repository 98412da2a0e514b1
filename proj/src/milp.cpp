#include "cnl/milp.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "cnl/errors.hpp"
#include "json.hpp"

namespace cnl {

namespace {

std::string idx(int a) { return std::to_string(a + 1); }

std::string num17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

int MilpModel::add_binary(std::string name) {
    vars.push_back({std::move(name), true, 0.0, 1.0});
    return static_cast<int>(vars.size()) - 1;
}

int MilpModel::add_continuous(std::string name, double lo, double hi) {
    vars.push_back({std::move(name), false, lo, hi});
    return static_cast<int>(vars.size()) - 1;
}

void MilpModel::add_row(std::string name, std::vector<Term> terms, char sense, double rhs) {
    rows.push_back({std::move(name), std::move(terms), sense, rhs});
}

int MilpModel::var_index(const std::string& name) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == name) return static_cast<int>(i);
    return -1;
}

int MilpModel::binary_count() const {
    int count = 0;
    for (const Var& v : vars) count += v.binary ? 1 : 0;
    return count;
}

namespace {

// Shared Assort/A&P structure: the caller provides the x-variable names (x_i
// or x_i_l) and any extra rows over x (one-price rows for pricing).
MilpModel build_ratio_milp(const LfpCoefficients& coeffs, const ConstraintSet& cs,
                           const std::vector<std::string>& x_names,
                           const std::vector<ConstraintRow>& extra_x_rows, std::string variant) {
    const int m = coeffs.m, N = coeffs.N;
    if (static_cast<int>(x_names.size()) != m) throw InputError("x name list must have length m");
    if (!(coeffs.c_scalar > 0.0)) throw InputError("denominator constant must be positive");

    MilpModel model;
    model.variant = std::move(variant);
    model.m = m;
    model.N = N;
    model.eps = coeffs.eps;
    for (int n = 0; n < N; ++n) model.K.push_back(coeffs.K(n));

    const double uw = 1.0 / coeffs.c_scalar;
    const double lw = 1.0 / (coeffs.c_scalar + coeffs.d_total());

    const int vw = model.add_continuous("w", lw, uw);
    std::vector<int> vx(m);
    for (int i = 0; i < m; ++i) vx[i] = model.add_binary(x_names[i]);
    std::vector<std::vector<int>> vy(N), vwy(N), vwz(N);
    for (int n = 0; n < N; ++n)
        for (int k = 0; k < coeffs.K(n); ++k)
            vy[n].push_back(model.add_binary("y_" + idx(n) + "_" + idx(k)));
    std::vector<int> vwx(m);
    for (int i = 0; i < m; ++i) vwx[i] = model.add_continuous("wx_" + idx(i), 0.0, uw);
    for (int n = 0; n < N; ++n)
        for (int k = 0; k < coeffs.K(n); ++k)
            vwy[n].push_back(model.add_continuous("wy_" + idx(n) + "_" + idx(k), 0.0, uw));
    for (int n = 0; n < N; ++n)
        for (int k = 0; k < coeffs.K(n); ++k)
            vwz[n].push_back(model.add_continuous("wz_" + idx(n) + "_" + idx(k), 0.0, uw));
    // ws_i_n_k declared product-major to keep related terms adjacent in the file
    std::vector<std::vector<std::vector<int>>> ws(m, std::vector<std::vector<int>>(N));
    for (int i = 0; i < m; ++i)
        for (int n = 0; n < N; ++n)
            for (int k = 0; k < coeffs.K(n); ++k)
                ws[i][n].push_back(
                    model.add_continuous("ws_" + idx(i) + "_" + idx(n) + "_" + idx(k), 0.0, uw));

    auto wx = [&](int i) { return vwx[i]; };

    // objective: sum_i (sum_n a_in) wx_i + sum_ink b_ink ws_ink
    for (int i = 0; i < m; ++i) {
        double a_sum = 0.0;
        for (int n = 0; n < N; ++n) a_sum += coeffs.a(i, n);
        if (a_sum != 0.0) model.objective.push_back({wx(i), a_sum});
    }
    for (int i = 0; i < m; ++i)
        for (int n = 0; n < N; ++n)
            for (int k = 0; k < coeffs.K(n); ++k) {
                double b = coeffs.b(i, n, k);
                if (b != 0.0) model.objective.push_back({ws[i][n][k], b});
            }

    // c w + sum d wz = 1
    {
        std::vector<MilpModel::Term> terms{{vw, coeffs.c_scalar}};
        for (int n = 0; n < N; ++n)
            for (int k = 0; k < coeffs.K(n); ++k)
                if (coeffs.d[n][k] != 0.0) terms.push_back({vwz[n][k], coeffs.d[n][k]});
        model.add_row("norm", std::move(terms), 'E', 1.0);
    }
    // sum_i alpha_in v_i wx_i - (L_n - v0_n) w - sum_k D_nk wz_nk = 0
    for (int n = 0; n < N; ++n) {
        std::vector<MilpModel::Term> terms;
        for (int i = 0; i < m; ++i)
            if (coeffs.avcol[n][i] != 0.0) terms.push_back({wx(i), coeffs.avcol[n][i]});
        double shift = coeffs.bounds.lower[n] - coeffs.v0[n];
        if (shift != 0.0) terms.push_back({vw, -shift});
        for (int k = 0; k < coeffs.K(n); ++k)
            if (coeffs.pw[n].delta[k] != 0.0) terms.push_back({vwz[n][k], -coeffs.pw[n].delta[k]});
        model.add_row("link_" + idx(n), std::move(terms), 'E', 0.0);
    }
    // segment ordering on the transformed variables; ranges can be empty for
    // small K_n
    for (int n = 0; n < N; ++n) {
        for (int k = 0; k + 1 < coeffs.K(n); ++k) {
            model.add_row("ord_yy_" + idx(n) + "_" + idx(k),
                          {{vwy[n][k + 1], 1.0}, {vwy[n][k], -1.0}}, 'L', 0.0);
            model.add_row("ord_yz_" + idx(n) + "_" + idx(k),
                          {{vwy[n][k], 1.0}, {vwz[n][k], -1.0}}, 'L', 0.0);
        }
        for (int k = 0; k + 2 < coeffs.K(n); ++k)
            model.add_row("ord_zy_" + idx(n) + "_" + idx(k),
                          {{vwz[n][k + 1], 1.0}, {vwy[n][k], -1.0}}, 'L', 0.0);
    }
    // Glover rows for ws = w * s (s = x * z)
    for (int i = 0; i < m; ++i)
        for (int n = 0; n < N; ++n)
            for (int k = 0; k < coeffs.K(n); ++k) {
                const std::string tail = idx(i) + "_" + idx(n) + "_" + idx(k);
                model.add_row("sx_" + tail, {{ws[i][n][k], 1.0}, {wx(i), -1.0}}, 'L', 0.0);
                model.add_row("sz_" + tail, {{ws[i][n][k], 1.0}, {vwz[n][k], -1.0}}, 'L', 0.0);
                model.add_row("slb_" + tail,
                              {{ws[i][n][k], 1.0}, {wx(i), -1.0}, {vwz[n][k], -1.0}, {vw, 1.0}},
                              'G', 0.0);
            }
    // Glover rows for wx = w * x
    for (int i = 0; i < m; ++i) {
        model.add_row("xw_" + idx(i), {{wx(i), 1.0}, {vw, -1.0}}, 'L', 0.0);
        model.add_row("xlb_" + idx(i), {{wx(i), 1.0}, {vw, -1.0}, {vx[i], -uw}}, 'G', -uw);
        model.add_row("xub_" + idx(i), {{wx(i), 1.0}, {vx[i], -uw}}, 'L', 0.0);
    }
    // Glover rows for wy = w * y
    for (int n = 0; n < N; ++n)
        for (int k = 0; k < coeffs.K(n); ++k) {
            const std::string tail = idx(n) + "_" + idx(k);
            model.add_row("yw_" + tail, {{vwy[n][k], 1.0}, {vw, -1.0}}, 'L', 0.0);
            model.add_row("ylb_" + tail, {{vwy[n][k], 1.0}, {vw, -1.0}, {vy[n][k], -uw}}, 'G', -uw);
            model.add_row("yub_" + tail, {{vwy[n][k], 1.0}, {vy[n][k], -uw}}, 'L', 0.0);
        }
    // original constraint rows over x, then any structural extras
    int user = 0;
    for (const ConstraintRow& row : cs.rows()) {
        std::vector<MilpModel::Term> terms;
        for (int i = 0; i < m; ++i)
            if (row.coeffs[i] != 0.0) terms.push_back({vx[i], row.coeffs[i]});
        model.add_row(row.tag + "_" + idx(user++), std::move(terms), 'L', row.rhs);
    }
    for (const ConstraintRow& row : extra_x_rows) {
        std::vector<MilpModel::Term> terms;
        for (int i = 0; i < m; ++i)
            if (row.coeffs[i] != 0.0) terms.push_back({vx[i], row.coeffs[i]});
        model.add_row(row.tag + "_" + idx(user++), std::move(terms), 'L', row.rhs);
    }
    return model;
}

}  // namespace

MilpModel build_assort_milp(const LfpCoefficients& coeffs, const ConstraintSet& cs) {
    std::vector<std::string> names;
    for (int i = 0; i < coeffs.m; ++i) names.push_back("x_" + idx(i));
    return build_ratio_milp(coeffs, cs, names, {}, "assort");
}

MilpModel build_anp_milp(const PricingLfp& plfp) {
    const int m = static_cast<int>(plfp.expansion.groups.size());
    const int L = plfp.expansion.groups.empty()
                      ? 1
                      : static_cast<int>(plfp.expansion.groups.front().size());
    std::vector<std::string> names;
    for (int i = 0; i < m; ++i)
        for (int l = 0; l < L; ++l) names.push_back("x_" + idx(i) + "_" + idx(l));
    std::vector<ConstraintRow> one_price;
    for (int i = 0; i < m; ++i) {
        ConstraintRow row;
        row.coeffs.assign(static_cast<std::size_t>(m) * L, 0.0);
        for (int j : plfp.expansion.groups[i]) row.coeffs[j] = 1.0;
        row.rhs = 1.0;
        row.tag = "one_price";
        one_price.push_back(std::move(row));
    }
    MilpModel model = build_ratio_milp(plfp.coeffs, plfp.lifted, names, one_price, "anp");
    return model;
}

MilpModel build_anp_milp(const PricingInstance& pinst, const ConstraintSet& cs, double eps) {
    return build_anp_milp(build_pricing_lfp(pinst, cs, eps));
}

MilpModel build_mixture_milp(const MixtureLfp& mlfp, const ConstraintSet& cs) {
    const int T = static_cast<int>(mlfp.types.size());
    if (T == 0) throw InputError("mixture needs at least one type");
    const int m = mlfp.types.front().m;
    const int N = mlfp.types.front().N;

    MilpModel model;
    model.variant = "mixture";
    model.m = m;
    model.N = N;
    model.eps = mlfp.types.front().eps;
    for (int t = 0; t < T; ++t)
        for (int n = 0; n < N; ++n) model.K.push_back(mlfp.types[t].K(n));

    std::vector<double> uw(T), lw(T);
    for (int t = 0; t < T; ++t) {
        if (!(mlfp.types[t].c_scalar > 0.0)) throw InputError("denominator constant must be positive");
        uw[t] = mlfp.theta[t] / mlfp.types[t].c_scalar;
        lw[t] = mlfp.theta[t] / (mlfp.types[t].c_scalar + mlfp.types[t].d_total());
    }

    std::vector<int> vw(T);
    for (int t = 0; t < T; ++t) vw[t] = model.add_continuous("w_" + idx(t), lw[t], uw[t]);
    std::vector<int> vx(m);
    for (int i = 0; i < m; ++i) vx[i] = model.add_binary("x_" + idx(i));
    auto K_of = [&](int t, int n) { return mlfp.types[t].K(n); };
    std::vector<std::vector<std::vector<int>>> vy(T, std::vector<std::vector<int>>(N));
    for (int t = 0; t < T; ++t)
        for (int n = 0; n < N; ++n)
            for (int k = 0; k < K_of(t, n); ++k)
                vy[t][n].push_back(model.add_binary("y_" + idx(t) + "_" + idx(n) + "_" + idx(k)));
    std::vector<std::vector<int>> vwx(T, std::vector<int>(m));
    for (int t = 0; t < T; ++t)
        for (int i = 0; i < m; ++i)
            vwx[t][i] = model.add_continuous("wx_" + idx(t) + "_" + idx(i), 0.0, uw[t]);
    std::vector<std::vector<std::vector<int>>> vwy(T, std::vector<std::vector<int>>(N)),
        vwz(T, std::vector<std::vector<int>>(N));
    for (int t = 0; t < T; ++t)
        for (int n = 0; n < N; ++n)
            for (int k = 0; k < K_of(t, n); ++k)
                vwy[t][n].push_back(
                    model.add_continuous("wy_" + idx(t) + "_" + idx(n) + "_" + idx(k), 0.0, uw[t]));
    for (int t = 0; t < T; ++t)
        for (int n = 0; n < N; ++n)
            for (int k = 0; k < K_of(t, n); ++k)
                vwz[t][n].push_back(
                    model.add_continuous("wz_" + idx(t) + "_" + idx(n) + "_" + idx(k), 0.0, uw[t]));
    std::vector<std::vector<std::vector<std::vector<int>>>> ws(
        T, std::vector<std::vector<std::vector<int>>>(m, std::vector<std::vector<int>>(N)));
    for (int t = 0; t < T; ++t)
        for (int i = 0; i < m; ++i)
            for (int n = 0; n < N; ++n)
                for (int k = 0; k < K_of(t, n); ++k)
                    ws[t][i][n].push_back(model.add_continuous(
                        "ws_" + idx(t) + "_" + idx(i) + "_" + idx(n) + "_" + idx(k), 0.0, uw[t]));

    for (int t = 0; t < T; ++t) {
        const LfpCoefficients& cf = mlfp.types[t];
        for (int i = 0; i < m; ++i) {
            double a_sum = 0.0;
            for (int n = 0; n < N; ++n) a_sum += cf.a(i, n);
            if (a_sum != 0.0) model.objective.push_back({vwx[t][i], a_sum});
        }
        for (int i = 0; i < m; ++i)
            for (int n = 0; n < N; ++n)
                for (int k = 0; k < K_of(t, n); ++k) {
                    double b = cf.b(i, n, k);
                    if (b != 0.0) model.objective.push_back({ws[t][i][n][k], b});
                }

        std::vector<MilpModel::Term> norm{{vw[t], cf.c_scalar}};
        for (int n = 0; n < N; ++n)
            for (int k = 0; k < K_of(t, n); ++k)
                if (cf.d[n][k] != 0.0) norm.push_back({vwz[t][n][k], cf.d[n][k]});
        model.add_row("norm_" + idx(t), std::move(norm), 'E', mlfp.theta[t]);

        for (int n = 0; n < N; ++n) {
            std::vector<MilpModel::Term> terms;
            for (int i = 0; i < m; ++i)
                if (cf.avcol[n][i] != 0.0) terms.push_back({vwx[t][i], cf.avcol[n][i]});
            double shift = cf.bounds.lower[n] - cf.v0[n];
            if (shift != 0.0) terms.push_back({vw[t], -shift});
            for (int k = 0; k < K_of(t, n); ++k)
                if (cf.pw[n].delta[k] != 0.0) terms.push_back({vwz[t][n][k], -cf.pw[n].delta[k]});
            model.add_row("link_" + idx(t) + "_" + idx(n), std::move(terms), 'E', 0.0);
        }
        for (int n = 0; n < N; ++n) {
            for (int k = 0; k + 1 < K_of(t, n); ++k) {
                model.add_row("ord_yy_" + idx(t) + "_" + idx(n) + "_" + idx(k),
                              {{vwy[t][n][k + 1], 1.0}, {vwy[t][n][k], -1.0}}, 'L', 0.0);
                model.add_row("ord_yz_" + idx(t) + "_" + idx(n) + "_" + idx(k),
                              {{vwy[t][n][k], 1.0}, {vwz[t][n][k], -1.0}}, 'L', 0.0);
            }
            for (int k = 0; k + 2 < K_of(t, n); ++k)
                model.add_row("ord_zy_" + idx(t) + "_" + idx(n) + "_" + idx(k),
                              {{vwz[t][n][k + 1], 1.0}, {vwy[t][n][k], -1.0}}, 'L', 0.0);
        }
        for (int i = 0; i < m; ++i)
            for (int n = 0; n < N; ++n)
                for (int k = 0; k < K_of(t, n); ++k) {
                    const std::string tail =
                        idx(t) + "_" + idx(i) + "_" + idx(n) + "_" + idx(k);
                    model.add_row("sx_" + tail, {{ws[t][i][n][k], 1.0}, {vwx[t][i], -1.0}}, 'L',
                                  0.0);
                    model.add_row("sz_" + tail, {{ws[t][i][n][k], 1.0}, {vwz[t][n][k], -1.0}}, 'L',
                                  0.0);
                    model.add_row(
                        "slb_" + tail,
                        {{ws[t][i][n][k], 1.0}, {vwx[t][i], -1.0}, {vwz[t][n][k], -1.0}, {vw[t], 1.0}},
                        'G', 0.0);
                }
        for (int i = 0; i < m; ++i) {
            const std::string tail = idx(t) + "_" + idx(i);
            model.add_row("xw_" + tail, {{vwx[t][i], 1.0}, {vw[t], -1.0}}, 'L', 0.0);
            model.add_row("xlb_" + tail, {{vwx[t][i], 1.0}, {vw[t], -1.0}, {vx[i], -uw[t]}}, 'G',
                          -uw[t]);
            model.add_row("xub_" + tail, {{vwx[t][i], 1.0}, {vx[i], -uw[t]}}, 'L', 0.0);
        }
        for (int n = 0; n < N; ++n)
            for (int k = 0; k < K_of(t, n); ++k) {
                const std::string tail = idx(t) + "_" + idx(n) + "_" + idx(k);
                model.add_row("yw_" + tail, {{vwy[t][n][k], 1.0}, {vw[t], -1.0}}, 'L', 0.0);
                model.add_row("ylb_" + tail,
                              {{vwy[t][n][k], 1.0}, {vw[t], -1.0}, {vy[t][n][k], -uw[t]}}, 'G',
                              -uw[t]);
                model.add_row("yub_" + tail, {{vwy[t][n][k], 1.0}, {vy[t][n][k], -uw[t]}}, 'L', 0.0);
            }
    }
    int user = 0;
    for (const ConstraintRow& row : cs.rows()) {
        std::vector<MilpModel::Term> terms;
        for (int i = 0; i < m; ++i)
            if (row.coeffs[i] != 0.0) terms.push_back({vx[i], row.coeffs[i]});
        model.add_row(row.tag + "_" + idx(user++), std::move(terms), 'L', row.rhs);
    }
    return model;
}

MilpModel build_mixture_milp(const MixtureInstance& minst, const ConstraintSet& cs, double eps) {
    return build_mixture_milp(build_mixture_lfp(minst, cs, eps), cs);
}

MilpModel build_feasibility_model(const LfpCoefficients& coeffs, const ConstraintSet& cs,
                                  double lambda) {
    if (lambda < 0.0) throw InputError("lambda must be non-negative");
    const int m = coeffs.m, N = coeffs.N;
    MilpModel model;
    model.variant = "feasibility";
    model.lambda = lambda;
    model.m = m;
    model.N = N;
    model.eps = coeffs.eps;
    for (int n = 0; n < N; ++n) model.K.push_back(coeffs.K(n));

    std::vector<int> vx(m);
    for (int i = 0; i < m; ++i) vx[i] = model.add_binary("x_" + idx(i));
    std::vector<std::vector<int>> vy(N), vz(N);
    for (int n = 0; n < N; ++n)
        for (int k = 0; k < coeffs.K(n); ++k)
            vy[n].push_back(model.add_binary("y_" + idx(n) + "_" + idx(k)));
    for (int n = 0; n < N; ++n)
        for (int k = 0; k < coeffs.K(n); ++k)
            vz[n].push_back(model.add_continuous("z_" + idx(n) + "_" + idx(k), 0.0, 1.0));
    std::vector<std::vector<std::vector<int>>> vs(m, std::vector<std::vector<int>>(N));
    for (int i = 0; i < m; ++i)
        for (int n = 0; n < N; ++n)
            for (int k = 0; k < coeffs.K(n); ++k)
                vs[i][n].push_back(
                    model.add_continuous("s_" + idx(i) + "_" + idx(n) + "_" + idx(k), 0.0, 1.0));

    for (int n = 0; n < N; ++n) {
        std::vector<MilpModel::Term> terms;
        for (int i = 0; i < m; ++i)
            if (coeffs.avcol[n][i] != 0.0) terms.push_back({vx[i], coeffs.avcol[n][i]});
        for (int k = 0; k < coeffs.K(n); ++k)
            if (coeffs.pw[n].delta[k] != 0.0) terms.push_back({vz[n][k], -coeffs.pw[n].delta[k]});
        model.add_row("link_" + idx(n), std::move(terms), 'E',
                      coeffs.bounds.lower[n] - coeffs.v0[n]);
    }
    for (int n = 0; n < N; ++n) {
        for (int k = 0; k + 1 < coeffs.K(n); ++k) {
            model.add_row("ord_yy_" + idx(n) + "_" + idx(k),
                          {{vy[n][k + 1], 1.0}, {vy[n][k], -1.0}}, 'L', 0.0);
            model.add_row("ord_yz_" + idx(n) + "_" + idx(k), {{vy[n][k], 1.0}, {vz[n][k], -1.0}},
                          'L', 0.0);
        }
        for (int k = 0; k + 2 < coeffs.K(n); ++k)
            model.add_row("ord_zy_" + idx(n) + "_" + idx(k),
                          {{vz[n][k + 1], 1.0}, {vy[n][k], -1.0}}, 'L', 0.0);
    }
    for (int i = 0; i < m; ++i)
        for (int n = 0; n < N; ++n)
            for (int k = 0; k < coeffs.K(n); ++k) {
                const std::string tail = idx(i) + "_" + idx(n) + "_" + idx(k);
                model.add_row("sx_" + tail, {{vs[i][n][k], 1.0}, {vx[i], -1.0}}, 'L', 0.0);
                model.add_row("sz_" + tail, {{vs[i][n][k], 1.0}, {vz[n][k], -1.0}}, 'L', 0.0);
                model.add_row("slb_" + tail,
                              {{vs[i][n][k], 1.0}, {vx[i], -1.0}, {vz[n][k], -1.0}}, 'G', -1.0);
            }
    int user = 0;
    for (const ConstraintRow& row : cs.rows()) {
        std::vector<MilpModel::Term> terms;
        for (int i = 0; i < m; ++i)
            if (row.coeffs[i] != 0.0) terms.push_back({vx[i], row.coeffs[i]});
        model.add_row(row.tag + "_" + idx(user++), std::move(terms), 'L', row.rhs);
    }
    // numerator - lambda * denominator >= 0
    {
        std::vector<MilpModel::Term> terms;
        for (int i = 0; i < m; ++i) {
            double a_sum = 0.0;
            for (int n = 0; n < N; ++n) a_sum += coeffs.a(i, n);
            if (a_sum != 0.0) terms.push_back({vx[i], a_sum});
        }
        for (int i = 0; i < m; ++i)
            for (int n = 0; n < N; ++n)
                for (int k = 0; k < coeffs.K(n); ++k) {
                    double b = coeffs.b(i, n, k);
                    if (b != 0.0) terms.push_back({vs[i][n][k], b});
                }
        for (int n = 0; n < N; ++n)
            for (int k = 0; k < coeffs.K(n); ++k)
                if (coeffs.d[n][k] != 0.0) terms.push_back({vz[n][k], -lambda * coeffs.d[n][k]});
        model.add_row("dinkelbach", std::move(terms), 'G', lambda * coeffs.c_scalar);
    }
    return model;
}

// ---- emission ---------------------------------------------------------------

namespace {

void append_terms(std::string& out, const std::vector<MilpModel::Term>& terms,
                  const std::vector<MilpModel::Var>& vars) {
    if (terms.empty()) {
        out += " 0";
        return;
    }
    std::size_t line_start = out.rfind('\n') + 1;
    bool first = true;
    for (const MilpModel::Term& t : terms) {
        std::string piece;
        double c = t.coeff;
        if (first) {
            piece = (c < 0 ? "- " : "") + num17(std::abs(c)) + " " + vars[t.var].name;
            first = false;
        } else {
            piece = (c < 0 ? "- " : "+ ") + num17(std::abs(c)) + " " + vars[t.var].name;
        }
        if (out.size() - line_start + piece.size() + 1 > 76) {
            out += "\n   ";
            line_start = out.rfind('\n') + 1;
        } else {
            out += " ";
        }
        out += piece;
    }
}

}  // namespace

std::string emit_lp(const MilpModel& model) {
    std::string out;
    out.reserve(model.rows.size() * 64 + 256);
    out += "Maximize\n obj:";
    append_terms(out, model.objective, model.vars);
    out += "\nSubject To\n";
    for (const MilpModel::Row& row : model.rows) {
        out += " " + row.name + ":";
        append_terms(out, row.terms, model.vars);
        out += row.sense == 'E' ? " = " : (row.sense == 'G' ? " >= " : " <= ");
        out += num17(row.rhs);
        out += "\n";
    }
    out += "Bounds\n";
    for (const MilpModel::Var& v : model.vars) {
        if (v.binary) continue;
        out += " " + num17(v.lo) + " <= " + v.name + " <= " + num17(v.hi) + "\n";
    }
    bool any_binary = false;
    for (const MilpModel::Var& v : model.vars) any_binary = any_binary || v.binary;
    if (any_binary) {
        out += "Binaries\n";
        std::string line = "";
        for (const MilpModel::Var& v : model.vars) {
            if (!v.binary) continue;
            if (line.size() + v.name.size() + 1 > 76) {
                out += line + "\n";
                line = "";
            }
            line += " " + v.name;
        }
        if (!line.empty()) out += line + "\n";
    }
    out += "End\n";
    return out;
}

std::string model_metadata_json(const MilpModel& model) {
    nlohmann::json j;
    j["variant"] = model.variant;
    j["m"] = model.m;
    j["N"] = model.N;
    j["K"] = model.K;
    j["eps"] = model.eps;
    if (model.variant == "feasibility") j["lambda"] = model.lambda;
    j["counts"] = {{"vars", model.vars.size()},
                   {"binaries", model.binary_count()},
                   {"constraints", model.rows.size()}};
    return j.dump(2) + "\n";
}

// ---- point checking ---------------------------------------------------------

PointCheck evaluate_point(const MilpModel& model, const PointValues& values, double tol) {
    PointCheck out;
    auto value_of = [&](int var) {
        auto it = values.find(model.vars[var].name);
        return it == values.end() ? 0.0 : it->second;
    };
    auto violate = [&](const std::string& what, double amount) {
        if (amount > out.worst_violation) out.worst_violation = amount;
        if (out.feasible) out.first_violated = what;
        out.feasible = false;
    };
    for (std::size_t vi = 0; vi < model.vars.size(); ++vi) {
        const MilpModel::Var& v = model.vars[vi];
        double val = value_of(static_cast<int>(vi));
        if (val < v.lo - tol) violate("lb(" + v.name + ")", v.lo - val);
        if (val > v.hi + tol) violate("ub(" + v.name + ")", val - v.hi);
        if (v.binary && std::abs(val - std::round(val)) > tol)
            violate("int(" + v.name + ")", std::abs(val - std::round(val)));
    }
    for (const MilpModel::Row& row : model.rows) {
        double lhs = 0.0;
        for (const MilpModel::Term& t : row.terms) lhs += t.coeff * value_of(t.var);
        double viol = 0.0;
        if (row.sense == 'L') viol = lhs - row.rhs;
        else if (row.sense == 'G') viol = row.rhs - lhs;
        else viol = std::abs(lhs - row.rhs);
        if (viol > tol) violate(row.name, viol);
    }
    for (const MilpModel::Term& t : model.objective) out.objective += t.coeff * value_of(t.var);
    return out;
}

PointValues charnes_cooper_point(const LfpCoefficients& coeffs, const BitVec& x) {
    PointValues pt;
    ApproxEval ev = approx_eval(coeffs, x);
    double w = 1.0 / ev.denominator;
    pt["w"] = w;
    for (int i = 0; i < coeffs.m; ++i) {
        pt["x_" + idx(i)] = x[i] ? 1.0 : 0.0;
        pt["wx_" + idx(i)] = x[i] ? w : 0.0;
    }
    for (int n = 0; n < coeffs.N; ++n)
        for (int k = 0; k < coeffs.K(n); ++k) {
            double z = ev.z[n][k];
            double y = z >= 1.0 ? 1.0 : 0.0;
            pt["y_" + idx(n) + "_" + idx(k)] = y;
            pt["wy_" + idx(n) + "_" + idx(k)] = y * w;
            pt["wz_" + idx(n) + "_" + idx(k)] = z * w;
            for (int i = 0; i < coeffs.m; ++i)
                pt["ws_" + idx(i) + "_" + idx(n) + "_" + idx(k)] = x[i] ? z * w : 0.0;
        }
    return pt;
}

PointValues charnes_cooper_point_anp(const PricingLfp& plfp, const BitVec& flat_x) {
    PointValues pt;
    const int m = static_cast<int>(plfp.expansion.groups.size());
    const int L = m > 0 ? static_cast<int>(plfp.expansion.groups.front().size()) : 1;
    for (int i = 0; i < m; ++i)
        for (int l = 0; l < L; ++l)
            pt["x_" + idx(i) + "_" + idx(l)] = flat_x[static_cast<std::size_t>(i) * L + l] ? 1.0 : 0.0;
    // virtual products use the plain wx_j / ws_j naming internally; rebuild
    // with the two-index names used by the A&P model
    ApproxEval ev = approx_eval(plfp.coeffs, flat_x);
    double w = 1.0 / ev.denominator;
    pt["w"] = w;
    for (int i = 0; i < m; ++i)
        for (int l = 0; l < L; ++l) {
            int j = i * L + l;
            pt["wx_" + idx(i) + "_" + idx(l)] = flat_x[j] ? w : 0.0;
        }
    for (int n = 0; n < plfp.coeffs.N; ++n)
        for (int k = 0; k < plfp.coeffs.K(n); ++k) {
            double z = ev.z[n][k];
            double y = z >= 1.0 ? 1.0 : 0.0;
            pt["y_" + idx(n) + "_" + idx(k)] = y;
            pt["wy_" + idx(n) + "_" + idx(k)] = y * w;
            pt["wz_" + idx(n) + "_" + idx(k)] = z * w;
            for (int i = 0; i < m; ++i)
                for (int l = 0; l < L; ++l) {
                    int j = i * L + l;
                    pt["ws_" + idx(i) + "_" + idx(l) + "_" + idx(n) + "_" + idx(k)] =
                        flat_x[j] ? z * w : 0.0;
                }
        }
    return pt;
}

PointValues charnes_cooper_point_mixture(const MixtureLfp& mlfp, const BitVec& x) {
    PointValues pt;
    const int m = mlfp.types.front().m;
    for (int i = 0; i < m; ++i) pt["x_" + idx(i)] = x[i] ? 1.0 : 0.0;
    for (std::size_t t = 0; t < mlfp.types.size(); ++t) {
        const LfpCoefficients& cf = mlfp.types[t];
        ApproxEval ev = approx_eval(cf, x);
        double w = mlfp.theta[t] / ev.denominator;
        std::string tp = idx(static_cast<int>(t));
        pt["w_" + tp] = w;
        for (int i = 0; i < m; ++i) pt["wx_" + tp + "_" + idx(i)] = x[i] ? w : 0.0;
        for (int n = 0; n < cf.N; ++n)
            for (int k = 0; k < cf.K(n); ++k) {
                double z = ev.z[n][k];
                double y = z >= 1.0 ? 1.0 : 0.0;
                pt["y_" + tp + "_" + idx(n) + "_" + idx(k)] = y;
                pt["wy_" + tp + "_" + idx(n) + "_" + idx(k)] = y * w;
                pt["wz_" + tp + "_" + idx(n) + "_" + idx(k)] = z * w;
                for (int i = 0; i < m; ++i)
                    pt["ws_" + tp + "_" + idx(i) + "_" + idx(n) + "_" + idx(k)] =
                        x[i] ? z * w : 0.0;
            }
    }
    return pt;
}

PointValues lfp_point(const LfpCoefficients& coeffs, const BitVec& x) {
    PointValues pt;
    ApproxEval ev = approx_eval(coeffs, x);
    for (int i = 0; i < coeffs.m; ++i) pt["x_" + idx(i)] = x[i] ? 1.0 : 0.0;
    for (int n = 0; n < coeffs.N; ++n)
        for (int k = 0; k < coeffs.K(n); ++k) {
            double z = ev.z[n][k];
            pt["z_" + idx(n) + "_" + idx(k)] = z;
            pt["y_" + idx(n) + "_" + idx(k)] = z >= 1.0 ? 1.0 : 0.0;
            for (int i = 0; i < coeffs.m; ++i)
                pt["s_" + idx(i) + "_" + idx(n) + "_" + idx(k)] = x[i] ? z : 0.0;
        }
    return pt;
}

}  // namespace cnl
