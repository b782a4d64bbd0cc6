#include "qedkit/tables.hpp"
#include "qedkit/bulk.hpp"
#include "qedkit/erlang_r.hpp"
#include "qedkit/errors.hpp"
#include "qedkit/ht_regimes.hpp"
#include "qedkit/overdispersion.hpp"
#include "qedkit/retrial.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace qedkit::tables {

double Table::worst_error_ratio() const {
    double worst = 0.0;
    for (const auto& row : rows)
        for (const auto& c : row.cells)
            if (c.published)
                worst = std::max(worst, std::fabs(c.computed - *c.published) / c.tolerance);
    return worst;
}

namespace {

Cell cell(double computed) { return Cell{computed, std::nullopt, 1e-3}; }
Cell cell(double computed, double published, double tol = 1e-3) {
    return Cell{computed, published, tol};
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// ---- Ch.2: bulk queue under rho = 1 - gamma/s^eta, Poisson input ----

double ch2_exact_mean(double gamma, double eta, int s) {
    const double rate = s * (1.0 - gamma / std::pow(static_cast<double>(s), eta));
    const bulk::BulkSpec spec{bulk::ArrivalLaw::poisson(rate), s};
    return bulk::exact_measures_roots(spec, bulk::find_roots_iter(spec)).mean_queue;
}

Table ch2_table(const std::string& id, double gamma,
                const std::vector<std::array<double, 4>>& rows) {
    // rows: {s, exact, x18, x20}
    Table t;
    t.id = id;
    t.title = "Bulk queue, eta = 1/2, gamma = " + fmt(gamma) +
              ": exact mean vs leading and corrected approximations";
    t.columns = {"rho", "exact", "leading", "corrected"};
    t.notes = {"published values are truncated to 3 decimals; tolerance 1e-3 covers that"};
    for (const auto& r : rows) {
        const int s = static_cast<int>(r[0]);
        const ht::RegimeSpec reg{0.5, gamma, 1.0, 1.0, s};
        Row row;
        row.label = "s=" + std::to_string(s);
        row.cells.push_back(cell(reg.rho()));
        row.cells.push_back(cell(ch2_exact_mean(gamma, 0.5, s), r[1]));
        row.cells.push_back(cell(ht::mean_leading(reg).value, r[2]));
        row.cells.push_back(cell(ht::mean_corrected_half(reg), r[3]));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table ch2_table3() {
    Table t;
    t.id = "ch2-table3";
    t.title = "Bulk queue, gamma = 0.1, eta in {0.6, 0.75, 0.9}: exact mean vs leading approximation";
    t.columns = {"exact 0.6", "lead 0.6", "exact 0.75", "lead 0.75", "exact 0.9", "lead 0.9"};
    const double gamma = 0.1;
    // {s, (exact, x18) for eta = 0.6, 0.75, 0.9}
    const std::vector<std::array<double, 7>> rows = {
        {10, 17.781, 18.125, 25.970, 26.318, 37.553, 37.905},
        {20, 27.309, 27.647, 44.391, 44.734, 71.195, 71.541},
        {50, 47.948, 48.281, 89.623, 89.961, 164.637, 164.978},
        {100, 73.245, 73.574, 152.031, 152.367, 309.353, 309.692},
        {200, 111.752, 112.079, 257.435, 257.769, 580.170, 580.507},
        {500, 195.082, 195.409, 515.443, 515.776, 1329.581, 1329.917},
        {1000, 297.122, 297.448, 870.524, 870.857, 2487.227, 2487.562},
    };
    const double etas[3] = {0.6, 0.75, 0.9};
    for (const auto& r : rows) {
        const int s = static_cast<int>(r[0]);
        Row row;
        row.label = "s=" + std::to_string(s);
        for (int e = 0; e < 3; ++e) {
            const double pub_exact = r[1 + 2 * e], pub_lead = r[2 + 2 * e];
            const ht::RegimeSpec reg{etas[e], gamma, 1.0, 1.0, s};
            const double tol_e = std::max(0.01, 1e-3 * pub_exact);
            row.cells.push_back(cell(ch2_exact_mean(gamma, etas[e], s), pub_exact, tol_e));
            row.cells.push_back(
                cell(ht::mean_leading(reg).value, pub_lead, std::max(0.01, 1e-3 * pub_lead)));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

// ---- Ch.3: Gamma-Poisson tables ----

Table ch3_table(const std::string& id, double beta, double delta,
                const std::vector<std::array<double, 8>>& rows) {
    // rows: {s, rho, exact_mean, h1, r1, sig_col, h1b_col, r4_col}
    Table t;
    t.id = id;
    t.title = "Gamma-Poisson bulk queue, beta = " + fmt(beta) + ", delta = " + fmt(delta);
    t.columns = {"rho", "exact mean", "classic mean", "robust mean",
                 "exact sig",  "classic sig", "robust sig"};
    t.notes = {"sigma columns carry the fourth root of the variance, matching the published"
               " presentation (the source tables applied a square root twice)"};
    for (const auto& r : rows) {
        const int s = static_cast<int>(r[0]);
        const od::OverdispersedSpec spec = od::OverdispersedSpec::from_capacity(s, beta, delta);
        const bulk::BulkSpec bspec{bulk::ArrivalLaw::gamma_poisson(spec.a, spec.b), s};
        const bulk::ExactMeasures exact =
            bulk::exact_measures_roots(bspec, bulk::find_roots_iter(bspec));
        const bulk::PollaczekMeasures pm = bulk::pollaczek_measures(bspec);
        const od::QueueMoments classic = od::classic_measures(spec);
        const od::QueueMoments robust = od::robust_measures(spec);
        Row row;
        row.label = "s=" + std::to_string(s);
        row.cells.push_back(cell(spec.rho()));
        row.cells.push_back(cell(exact.mean_queue, r[2]));
        row.cells.push_back(cell(classic.mean_queue, r[3]));
        row.cells.push_back(cell(robust.mean_queue, r[4]));
        row.cells.push_back(cell(std::pow(pm.variance_queue, 0.25), r[5]));
        row.cells.push_back(cell(std::pow(classic.variance_queue, 0.25), r[6]));
        row.cells.push_back(cell(std::pow(robust.variance_queue, 0.25), r[7]));
        t.rows.push_back(std::move(row));
    }
    return t;
}

// ---- Ch.4: retrial approximation rows ----

Table ch4_table1() {
    Table t;
    t.id = "ch4-table1";
    t.title = "M/M/s/n with slow retrials: fixed-point approximations";
    t.columns = {"delay", "sqrtR x block"};
    t.notes = {"the (1,1) blocking entry is printed as 0.1106 in the source; its own delay"
               " entry 0.1798 pins alpha = 0.1116, so the printed value is a transposition"};
    const std::vector<std::array<double, 4>> cells = {
        {0.5, 0.5, 0.3225, 0.6734},
        {1.0, 0.5, 0.1349, 0.2206},
        {0.5, 1.0, 0.4062, 0.3828},
        {1.0, 1.0, 0.1798, 0.1116},
    };
    for (const auto& c : cells) {
        const retrial::RetrialApprox a = retrial::approx_with_retrials(
            retrial::RetrialModel::Basic, {c[0], c[1], 1.0, 1.0}, 1.0);
        Row row;
        row.label = "(beta,gamma)=(" + fmt(c[0]) + "," + fmt(c[1]) + ")";
        row.cells.push_back(cell(a.delay_prob, c[2], 6e-5));
        row.cells.push_back(cell(a.fixed_point.alpha, c[3], 6e-5));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table ch4_table2() {
    Table t;
    t.id = "ch4-table2";
    t.title = "Cloud tandem with slow retrials: fixed-point approximations";
    t.columns = {"delay", "sqrtR x block"};
    const std::vector<std::array<double, 5>> cells = {
        {1.0, 0.5, 1.0, 0.4029, 0.5638},  {1.0, 1.0, 1.0, 0.1709, 0.1992},
        {0.2, 0.5, 1.0, 0.4687, 0.3029},  {0.2, 1.0, 1.0, 0.2042, 0.1326},
        {0.02, 0.5, 1.0, 0.4999, 0.0862}, {0.02, 1.0, 1.0, 0.2207, 0.0595},
    };
    for (const auto& c : cells) {
        retrial::RetrialParams params;
        params.beta = c[1];
        params.gamma = c[2];
        params.kappa = c[0];
        const retrial::RetrialApprox a =
            retrial::approx_with_retrials(retrial::RetrialModel::Cloud, params, 1.0);
        Row row;
        row.label = "kappa=" + fmt(c[0]) + " (" + fmt(c[1]) + "," + fmt(c[2]) + ")";
        row.cells.push_back(cell(a.delay_prob, c[3], 6e-5));
        row.cells.push_back(cell(a.fixed_point.alpha, c[4], 6e-5));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table ch4_table3() {
    Table t;
    t.id = "ch4-table3";
    t.title = "Erlang-A with slow retrials: fixed-point approximations";
    t.columns = {"delay", "sqrtR x abandon"};
    const std::vector<std::array<double, 4>> cells = {
        {0.5, 0.2, 0.4757, 0.1182}, {0.5, 1.0, 0.4254, 0.3120}, {0.5, 10.0, 0.2933, 0.7695},
        {1.0, 0.2, 0.2105, 0.0335}, {1.0, 1.0, 0.1842, 0.1005}, {1.0, 10.0, 0.1162, 0.2642},
    };
    for (const auto& c : cells) {
        retrial::RetrialParams params;
        params.beta = c[0];
        params.theta = c[1];
        const retrial::RetrialApprox a =
            retrial::approx_with_retrials(retrial::RetrialModel::Abandon, params, 1.0);
        Row row;
        row.label = "beta=" + fmt(c[0]) + " theta=" + fmt(c[1]);
        row.cells.push_back(cell(a.delay_prob, c[2], 6e-5));
        row.cells.push_back(cell(a.fixed_point.alpha, c[3], 6e-5));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table ch4_table4() {
    Table t;
    t.id = "ch4-table4";
    t.title = "Cloud dimensioning pairs (beta*, gamma*) and their implied with-retrial delay";
    t.columns = {"beta*", "gamma*", "implied delay"};
    t.notes = {"pairs are the published two-decimal pins; the implied delay column re-solves"
               " the fixed point at the pinned pair and should land near the target"};
    const std::vector<std::array<double, 4>> cells = {
        {1.0, 0.10, 1.17, 0.35}, {1.0, 0.25, 0.73, 0.57}, {1.0, 0.40, 0.48, 0.78},
        {0.2, 0.10, 1.34, 0.50}, {0.2, 0.25, 0.87, 0.65}, {0.2, 0.40, 0.59, 0.79},
        {0.02, 0.10, 1.41, 0.68}, {0.02, 0.25, 0.93, 0.74}, {0.02, 0.40, 0.59, 0.79},
    };
    for (const auto& c : cells) {
        retrial::RetrialParams params;
        params.beta = c[2];
        params.gamma = c[3];
        params.kappa = c[0];
        const retrial::RetrialApprox a =
            retrial::approx_with_retrials(retrial::RetrialModel::Cloud, params, 1.0);
        Row row;
        row.label = "kappa=" + fmt(c[0]) + " eps=" + fmt(c[1]);
        row.cells.push_back(cell(c[2]));
        row.cells.push_back(cell(c[3]));
        row.cells.push_back(cell(a.delay_prob, c[1], 2.5e-2));
        t.rows.push_back(std::move(row));
    }
    return t;
}

// ---- Ch.5: Erlang-R tables ----

erlang_r::ErlangRSpec ch5_case_spec(int case_id, double R1, double beta, double gamma) {
    double mu = 1.0, delta = 0.0, p = 0.0;
    if (case_id == 1) { delta = 0.10; p = 0.90; }
    else if (case_id == 2) { delta = 0.25; p = 0.75; }
    else { delta = 0.50; p = 0.50; }
    const double r = delta / (delta + p * mu);
    erlang_r::ErlangRSpec spec{};
    spec.lambda = R1 * (1.0 - p) * mu;
    spec.mu = mu;
    spec.delta = delta;
    spec.p = p;
    spec.s = static_cast<int>(std::ceil(R1 + beta * std::sqrt(R1)));
    spec.n = static_cast<int>(std::llround(R1 / r + gamma * std::sqrt(R1 / r)));
    return spec;
}

struct Ch5Published {
    double R1, pd, pb, ew;
};

Table ch5_blocking(const std::string& id, int case_id,
                   const std::vector<std::pair<std::array<double, 2>,
                                               std::vector<Ch5Published>>>& blocks,
                   const std::vector<std::array<double, 5>>& approx) {
    Table t;
    t.id = id;
    t.title = "Erlang-R with blocking, case " + std::to_string(case_id) +
              ": exact product form and QED limits";
    t.columns = {"P(delay)", "sqrtR1 x P(block)", "sqrtR1 x E[W]"};
    t.notes = {"E[W] column: published only on rows whose s is integral under the source's"
               " rounding; the source used a different s-rounding for that column"};
    for (const auto& [bg, rows] : blocks) {
        for (const auto& r : rows) {
            const erlang_r::ErlangRSpec spec = ch5_case_spec(case_id, r.R1, bg[0], bg[1]);
            const erlang_r::BlockingMeasures m = erlang_r::blocking_measures(spec);
            Row row;
            row.label = "(" + fmt(bg[0]) + "," + fmt(bg[1]) + ") R1=" + fmt(r.R1);
            const double sq = std::sqrt(r.R1);
            row.cells.push_back(cell(m.p_delay, r.pd, 6e-5));
            row.cells.push_back(cell(sq * m.p_block, r.pb, 6e-5));
            // EW published only when ceil(R1 + beta sqrt(R1)) is the exact value
            const double s_real = r.R1 + bg[0] * std::sqrt(r.R1);
            if (std::fabs(s_real - std::round(s_real)) < 1e-9)
                row.cells.push_back(cell(sq * m.expected_wait, r.ew, 6e-5));
            else
                row.cells.push_back(cell(sq * m.expected_wait));
            t.rows.push_back(std::move(row));
        }
    }
    for (const auto& a : approx) {
        const double rfrac = ch5_case_spec(case_id, 100.0, 1.0, 1.0).needy_fraction();
        const erlang_r::QedBlockingLimits lim =
            erlang_r::qed_limits_blocking(rfrac, {a[0], a[1]});
        Row row;
        row.label = "approx (" + fmt(a[0]) + "," + fmt(a[1]) + ")";
        row.cells.push_back(cell(lim.g, a[2], 6e-5));
        row.cells.push_back(cell(lim.f, a[3], 6e-5));
        row.cells.push_back(cell(lim.h, a[4], 6e-5));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table ch5_holding_heuristic(const std::string& id, int case_id,
                            const std::vector<std::array<double, 4>>& approx) {
    Table t;
    t.id = id;
    t.title = "Erlang-R with holding, case " + std::to_string(case_id) +
              ": fixed-point heuristic rows";
    t.columns = {"P(delay)", "sqrtR1 x E[W]"};
    const double rfrac = ch5_case_spec(case_id, 100.0, 1.0, 1.0).needy_fraction();
    for (const auto& a : approx) {
        const erlang_r::HoldingHeuristic h =
            erlang_r::holding_heuristic(rfrac, {a[0], a[1]});
        Row row;
        row.label = "approx (" + fmt(a[0]) + "," + fmt(a[1]) + ")";
        row.cells.push_back(cell(h.g, a[2], 6e-5));
        row.cells.push_back(cell(h.h, a[3], 6e-5));
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace

std::vector<std::string> table_ids() {
    return {"ch2-table1", "ch2-table2", "ch2-table3", "ch3-table1", "ch3-table2",
            "ch3-table3", "ch3-table4", "ch4-table1", "ch4-table2", "ch4-table3",
            "ch4-table4", "ch5-case1",  "ch5-case2",  "ch5-case3",  "ch5-holding-case1",
            "ch5-holding-case2", "ch5-holding-case3", "ch5-qbd-case1", "ch5-qbd-case2",
            "ch5-qbd-case3"};
}

namespace {

Table ch5_qbd(const std::string& id, int case_id) {
    // published simulated p_delay at R1 in {5,10,25} for the four hedge cells
    static const double sim[3][4][3] = {
        // case 1: (1,1) (1,2) (2,1) (2,2)
        {{0.1532, 0.1622, 0.2340},
         {0.1628, 0.1697, 0.2413},
         {0.0310, 0.0267, 0.0348},
         {0.0344, 0.0292, 0.0373}},
        // case 2
        {{0.1327, 0.1446, 0.2204},
         {0.1620, 0.1683, 0.2442},
         {0.0219, 0.0199, 0.0283},
         {0.0322, 0.0284, 0.0375}},
        // case 3
        {{0.0977, 0.1070, 0.1926},
         {0.1521, 0.1648, 0.2421},
         {0.0072, 0.0067, 0.0148},
         {0.0250, 0.0235, 0.0325}},
    };
    static const double hedges[4][2] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
    static const double r1s[3] = {5, 10, 25};
    Table t;
    t.id = id;
    t.title = "Erlang-R with holding, case " + std::to_string(case_id) +
              ": QBD-exact delay vs published simulation";
    t.columns = {"QBD P(delay)"};
    t.notes = {"published values are the source's simulated rows; tolerance 0.02"};
    for (int hc = 0; hc < 4; ++hc) {
        for (int ri = 0; ri < 3; ++ri) {
            const erlang_r::ErlangRSpec spec =
                ch5_case_spec(case_id, r1s[ri], hedges[hc][0], hedges[hc][1]);
            const erlang_r::MatrixGeomSolution sol =
                erlang_r::qbd_solve(erlang_r::qbd_build(spec));
            const erlang_r::HoldingMeasures m = erlang_r::holding_measures(sol, spec);
            Row row;
            row.label = "(" + fmt(hedges[hc][0]) + "," + fmt(hedges[hc][1]) +
                        ") R1=" + fmt(r1s[ri]);
            row.cells.push_back(cell(m.p_delay, sim[case_id - 1][hc][ri], 2e-2));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

} // namespace

Table build(const std::string& id) {
    if (id == "ch2-table1")
        return ch2_table(id, 1.0,
                         {{{10, 0.244, 0.399, 0.247},
                           {20, 0.410, 0.565, 0.412},
                           {50, 0.739, 0.893, 0.741},
                           {100, 1.110, 1.263, 1.111},
                           {200, 1.633, 1.787, 1.634},
                           {500, 2.672, 2.825, 2.673},
                           {1000, 3.843, 3.996, 3.843}}});
    if (id == "ch2-table2")
        return ch2_table(id, 0.1,
                         {{{10, 13.707, 14.046, 13.732},
                           {20, 19.533, 19.865, 19.551},
                           {50, 31.084, 31.409, 31.095},
                           {100, 44.097, 44.419, 44.106},
                           {200, 62.499, 62.819, 62.505},
                           {500, 99.008, 99.325, 99.011},
                           {1000, 140.152, 140.468, 140.154}}});
    if (id == "ch2-table3") return ch2_table3();
    if (id == "ch3-table1")
        return ch3_table(id, 1.0, 0.6,
                         {{{5, 0.609, 0.343, 0.246, 0.363, 1.002, 0.835, 0.978},
                           {10, 0.683, 0.535, 0.400, 0.551, 1.239, 1.063, 1.216},
                           {50, 0.815, 1.405, 1.168, 1.405, 1.995, 1.817, 1.971},
                           {100, 0.855, 2.113, 1.824, 2.105, 2.445, 2.270, 2.420},
                           {500, 0.920, 5.446, 5.006, 5.412, 3.923, 3.762, 3.899}}});
    if (id == "ch3-table2")
        return ch3_table(id, 1.0, 0.8,
                         {{{5, 0.550, 0.462, 0.284, 0.479, 1.162, 0.896, 1.130},
                           {10, 0.587, 0.852, 0.521, 0.855, 1.570, 1.213, 1.528},
                           {50, 0.668, 3.197, 2.093, 3.106, 3.025, 2.433, 2.947},
                           {100, 0.700, 5.561, 3.784, 5.377, 3.983, 3.270, 3.887},
                           {500, 0.766, 19.887, 14.741, 19.202, 7.514, 6.455, 7.361}}});
    if (id == "ch3-table3")
        return ch3_table(id, 0.1, 0.6,
                         {{{5, 0.949, 11.532, 11.306, 11.495, 3.634, 3.559, 3.602},
                           {10, 0.961, 17.565, 17.268, 17.548, 4.474, 4.398, 4.444},
                           {50, 0.979, 46.368, 45.869, 46.418, 7.241, 7.168, 7.218},
                           {100, 0.984, 70.340, 69.735, 70.430, 8.910, 8.839, 8.888},
                           {500, 0.991, 184.900, 183.989, 185.108, 14.422, 14.357, 14.404}}});
    if (id == "ch3-table4")
        return ch3_table(id, 0.1, 0.8,
                         {{{5, 0.931, 15.730, 15.209, 15.909, 4.276, 4.127, 4.233},
                           {10, 0.939, 27.561, 26.672, 27.958, 5.652, 5.466, 5.605},
                           {50, 0.955, 100.660, 97.967, 102.070, 10.760, 10.476, 10.698},
                           {100, 0.961, 175.591, 171.360, 177.818, 14.189, 13.855, 14.117},
                           {500, 0.971, 638.097, 626.346, 644.105, 26.963, 26.490, 26.864}}});
    if (id == "ch4-table1") return ch4_table1();
    if (id == "ch4-table2") return ch4_table2();
    if (id == "ch4-table3") return ch4_table3();
    if (id == "ch4-table4") return ch4_table4();
    if (id == "ch5-case1")
        return ch5_blocking(
            id, 1,
            {{{{1.0, 1.0}},
              {{5, 0.1270, 0.0900, 0.2283},
               {10, 0.1340, 0.0910, 0.1919},
               {25, 0.1981, 0.0945, 0.1614},
               {50, 0.1513, 0.0963, 0.1588},
               {100, 0.1880, 0.0956, 0.1532},
               {250, 0.1797, 0.0971, 0.1399}}},
             {{{1.0, 2.0}},
              {{5, 0.1553, 0.0212, 0.1085},
               {10, 0.1628, 0.0206, 0.1205},
               {25, 0.2356, 0.0216, 0.2145},
               {50, 0.1830, 0.0205, 0.1496},
               {100, 0.2231, 0.0224, 0.2055},
               {250, 0.2143, 0.0219, 0.2057}}},
             {{{2.0, 1.0}},
              {{5, 0.0237, 0.0868, 0.0282},
               {10, 0.0206, 0.0872, 0.0188},
               {25, 0.0277, 0.0876, 0.0123},
               {50, 0.0185, 0.0913, 0.0116},
               {100, 0.0232, 0.0888, 0.0103},
               {250, 0.0203, 0.0905, 0.0079}}},
             {{{2.0, 2.0}},
              {{5, 0.0322, 0.0192, 0.0391},
               {10, 0.0278, 0.0183, 0.0264},
               {25, 0.0363, 0.0174, 0.0174},
               {50, 0.0249, 0.0175, 0.0166},
               {100, 0.0303, 0.0183, 0.0145},
               {250, 0.0267, 0.0179, 0.0109}}}},
            {{1.0, 1.0, 0.1767, 0.0981, 0.1437},
             {1.0, 2.0, 0.2108, 0.0217, 0.1947},
             {2.0, 1.0, 0.0188, 0.0914, 0.0084},
             {2.0, 2.0, 0.0247, 0.0177, 0.0118}});
    if (id == "ch5-case2")
        return ch5_blocking(
            id, 2,
            {{{{1.0, 1.0}},
              {{5, 0.0911, 0.1538, 0.0479},
               {10, 0.1010, 0.1498, 0.0560},
               {25, 0.1594, 0.1509, 0.1058},
               {50, 0.1201, 0.1506, 0.0726},
               {100, 0.1514, 0.1539, 0.1001},
               {250, 0.1459, 0.1524, 0.0957}}},
             {{{1.0, 2.0}},
              {{5, 0.1431, 0.0345, 0.0909},
               {10, 0.1520, 0.0326, 0.1025},
               {25, 0.2192, 0.0405, 0.1785},
               {50, 0.1697, 0.0381, 0.1248},
               {100, 0.2088, 0.0398, 0.1704},
               {250, 0.2003, 0.0397, 0.1618}}},
             {{{2.0, 1.0}},
              {{5, 0.0130, 0.1484, 0.0044},
               {10, 0.0121, 0.1432, 0.0042},
               {25, 0.0182, 0.1383, 0.0070},
               {50, 0.0119, 0.1415, 0.0043},
               {100, 0.0154, 0.1413, 0.0059},
               {250, 0.0136, 0.1403, 0.0051}}},
             {{{2.0, 2.0}},
              {{5, 0.0277, 0.0294, 0.0109},
               {10, 0.0244, 0.0267, 0.0098},
               {25, 0.0319, 0.0295, 0.0141},
               {50, 0.0216, 0.0301, 0.0090},
               {100, 0.0270, 0.0290, 0.0119},
               {250, 0.0236, 0.0291, 0.0103}}}},
            {{1.0, 1.0, 0.1429, 0.1569, 0.0940},
             {1.0, 2.0, 0.1976, 0.0391, 0.1617},
             {2.0, 1.0, 0.0126, 0.1445, 0.0048},
             {2.0, 2.0, 0.0220, 0.0284, 0.0097}});
    if (id == "ch5-case3")
        return ch5_blocking(
            id, 3,
            {{{{1.0, 1.0}},
              {{5, 0.0547, 0.1945, 0.0221},
               {10, 0.0579, 0.2158, 0.0237},
               {25, 0.1113, 0.2086, 0.0544},
               {50, 0.0813, 0.2050, 0.0363},
               {100, 0.1060, 0.2146, 0.0509},
               {250, 0.1006, 0.2179, 0.0475}}},
             {{{1.0, 2.0}},
              {{5, 0.1181, 0.0604, 0.0617},
               {10, 0.1325, 0.0526, 0.0746},
               {25, 0.1959, 0.0641, 0.1311},
               {50, 0.1523, 0.0562, 0.0933},
               {100, 0.1873, 0.0632, 0.1250},
               {250, 0.1820, 0.0596, 0.1214}}},
             {{{2.0, 1.0}},
              {{5, 0.0034, 0.1888, 0.0009},
               {10, 0.0030, 0.2093, 0.0008},
               {25, 0.0070, 0.1937, 0.0020},
               {50, 0.0043, 0.1946, 0.0011},
               {100, 0.0061, 0.1999, 0.0017},
               {250, 0.0052, 0.2037, 0.0014}}},
             {{{2.0, 2.0}},
              {{5, 0.0175, 0.0510, 0.0057},
               {10, 0.0172, 0.0416, 0.0058},
               {25, 0.0243, 0.0440, 0.0089},
               {50, 0.0163, 0.0414, 0.0056},
               {100, 0.0207, 0.0431, 0.0076},
               {250, 0.0185, 0.0401, 0.0067}}}},
            {{1.0, 1.0, 0.1011, 0.2185, 0.0478},
             {1.0, 2.0, 0.1792, 0.0605, 0.1199},
             {2.0, 1.0, 0.0052, 0.2039, 0.0014},
             {2.0, 2.0, 0.0173, 0.0404, 0.0063}});
    if (id == "ch5-holding-case1")
        return ch5_holding_heuristic(id, 1,
                                     {{{1.0, 1.0, 0.2076, 0.1777},
                                       {1.0, 2.0, 0.2187, 0.2050},
                                       {2.0, 1.0, 0.0229, 0.0104},
                                       {2.0, 2.0, 0.0257, 0.0124}}});
    if (id == "ch5-holding-case2")
        return ch5_holding_heuristic(id, 2,
                                     {{{1.0, 1.0, 0.1840, 0.1277},
                                       {1.0, 2.0, 0.2109, 0.1759},
                                       {2.0, 1.0, 0.0169, 0.0066},
                                       {2.0, 2.0, 0.0234, 0.0104}}});
    if (id == "ch5-holding-case3")
        return ch5_holding_heuristic(id, 3,
                                     {{{1.0, 1.0, 0.1442, 0.0711},
                                       {1.0, 2.0, 0.1981, 0.1354},
                                       {2.0, 1.0, 0.0078, 0.0022},
                                       {2.0, 2.0, 0.0188, 0.0069}}});
    if (id == "ch5-qbd-case1") return ch5_qbd(id, 1);
    if (id == "ch5-qbd-case2") return ch5_qbd(id, 2);
    if (id == "ch5-qbd-case3") return ch5_qbd(id, 3);
    throw domain_error("tables: unknown table id " + id);
}

} // namespace qedkit::tables
