// qedkit command-line front end: staffing rules, exact evaluators, QED
// approximations, bulk-queue roots, count-data fitting, simulation, and the
// built-in reference tables.

#include "qedkit/bulk.hpp"
#include "qedkit/dimensioning.hpp"
#include "qedkit/erlang_r.hpp"
#include "qedkit/errors.hpp"
#include "qedkit/grw.hpp"
#include "qedkit/ht_regimes.hpp"
#include "qedkit/mms.hpp"
#include "qedkit/overdispersion.hpp"
#include "qedkit/retrial.hpp"
#include "qedkit/sim.hpp"
#include "qedkit/tables.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;

int g_precision = 4;

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string num(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(g_precision) << v;
    return os.str();
}

void print_table(const qedkit::tables::Table& t, const std::string& format) {
    if (format == "json") {
        json j;
        j["id"] = t.id;
        j["title"] = t.title;
        j["columns"] = t.columns;
        for (const auto& row : t.rows) {
            json r;
            r["label"] = row.label;
            for (const auto& c : row.cells) {
                json cj;
                cj["computed"] = c.computed;
                if (c.published) cj["published"] = *c.published;
                r["cells"].push_back(cj);
            }
            j["rows"].push_back(r);
        }
        for (const auto& n : t.notes) j["notes"].push_back(n);
        print_json(j);
        return;
    }
    if (format == "csv") {
        std::cout << "label";
        for (const auto& c : t.columns) std::cout << ',' << c << ",published " << c;
        std::cout << '\n';
        for (const auto& row : t.rows) {
            std::cout << row.label;
            for (const auto& c : row.cells) {
                std::cout << ',' << num(c.computed) << ',';
                if (c.published) std::cout << num(*c.published);
            }
            std::cout << '\n';
        }
        return;
    }
    std::cout << t.title << "\n";
    std::cout << std::left << std::setw(26) << "row";
    for (const auto& c : t.columns) std::cout << std::right << std::setw(14) << c;
    std::cout << "\n";
    for (const auto& row : t.rows) {
        std::cout << std::left << std::setw(26) << row.label;
        for (const auto& c : row.cells) {
            std::string s = num(c.computed);
            if (c.published) {
                const bool ok = std::fabs(c.computed - *c.published) <= c.tolerance;
                s += ok ? "" : "!";
            }
            std::cout << std::right << std::setw(14) << s;
        }
        std::cout << "\n";
    }
    for (const auto& n : t.notes) std::cout << "note: " << n << "\n";
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
    if (const char* env = std::getenv("QEDKIT_SEED")) return std::strtoull(env, nullptr, 10);
    return fallback;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qedkit: queueing performance analysis and capacity dimensioning"};
    app.require_subcommand(1);
    app.add_option("--precision", g_precision, "decimal digits in text output");

    // ---- staff ----
    auto* staff = app.add_subcommand("staff", "staffing levels for a delay target or cost ratio");
    std::string staff_model = "mms";
    double st_lambda = 100.0, st_mu = 1.0, st_target = 0.5, st_cost = -1.0;
    double st_kappa = 1.0, st_gamma = 1.0, st_delta = 0.25, st_p = 0.75, st_eps = 0.25;
    staff->add_option("--model", staff_model, "mms|cloud|erlang-r");
    staff->add_option("--lambda", st_lambda);
    staff->add_option("--mu", st_mu);
    staff->add_option("--target-delay", st_target);
    staff->add_option("--cost-ratio", st_cost);
    staff->add_option("--kappa", st_kappa);
    staff->add_option("--gamma", st_gamma, "preset space hedge (cloud / erlang-r)");
    staff->add_option("--delta", st_delta);
    staff->add_option("--p", st_p);
    staff->add_option("--epsilon", st_eps);

    // ---- eval ----
    auto* eval = app.add_subcommand("eval", "exact steady-state measures");
    std::string eval_model = "mms";
    double ev_lambda = 1.0, ev_mu = 1.0, ev_theta = 1.0, ev_a = 1.0, ev_b = 1.0;
    double ev_delta = 0.25, ev_p = 0.75;
    int ev_s = 1, ev_n = -1, ev_K = 100;
    eval->add_option("--model", eval_model,
                     "mms|mmsn|erlang-a|erlang-b|bulk|erlang-r-blocking|erlang-r-holding");
    eval->add_option("--lambda", ev_lambda);
    eval->add_option("--mu", ev_mu);
    eval->add_option("--theta", ev_theta);
    eval->add_option("--s", ev_s);
    eval->add_option("--n", ev_n);
    eval->add_option("--a", ev_a);
    eval->add_option("--b", ev_b);
    eval->add_option("--delta", ev_delta);
    eval->add_option("--p", ev_p);
    eval->add_option("--spitzer-terms", ev_K);

    // ---- approx ----
    auto* approx = app.add_subcommand("approx", "QED approximations");
    std::string ap_model = "grw";
    double ap_beta = 1.0, ap_gamma = 1.0, ap_theta = 1.0, ap_kappa = 1.0, ap_r = 0.1;
    double ap_eta = 0.5, ap_g = 1.0, ap_a = 1.0, ap_b = 1.0, ap_R = 100.0, ap_delta = 0.6;
    int ap_s = 10;
    bool ap_retrial = false;
    approx->add_option("--model", ap_model,
                       "grw|ht|overdispersion|basic|cloud|erlang-a|erlang-r");
    approx->add_option("--beta", ap_beta);
    approx->add_option("--gamma", ap_gamma);
    approx->add_option("--theta", ap_theta);
    approx->add_option("--kappa", ap_kappa);
    approx->add_option("--r", ap_r);
    approx->add_option("--eta", ap_eta);
    approx->add_option("--hedge", ap_g, "gamma of the ht scaling");
    approx->add_option("--a", ap_a);
    approx->add_option("--b", ap_b);
    approx->add_option("--R", ap_R);
    approx->add_option("--delta", ap_delta);
    approx->add_option("--s", ap_s);
    approx->add_flag("--retrial", ap_retrial, "apply the fixed-point retrial correction");

    // ---- roots ----
    auto* roots = app.add_subcommand("roots", "roots of z^s - A(z) in the unit disk");
    std::string rt_dist = "poisson", rt_method = "iter";
    double rt_lambda = 6.83, rt_a = 4.0, rt_b = 1.0;
    int rt_s = 10;
    roots->add_option("--dist", rt_dist, "poisson|gamma-poisson");
    roots->add_option("--lambda", rt_lambda);
    roots->add_option("--a", rt_a);
    roots->add_option("--b", rt_b);
    roots->add_option("--s", rt_s);
    roots->add_option("--method", rt_method, "iter|bl");

    // ---- fit ----
    auto* fit = app.add_subcommand("fit", "overdispersion tests and Gamma-Poisson fit");
    std::string fit_csv;
    bool fit_header = false, fit_boot = false;
    double fit_alpha = 0.05;
    int fit_boot_reps = 10000;
    fit->add_option("--csv", fit_csv, "one-column CSV of counts")->required();
    fit->add_flag("--header", fit_header, "skip the first line");
    fit->add_option("--alpha", fit_alpha);
    fit->add_flag("--bootstrap", fit_boot, "parametric bootstrap goodness-of-fit");
    fit->add_option("--bootstrap-reps", fit_boot_reps);

    // ---- simulate ----
    auto* simc = app.add_subcommand("simulate", "discrete-event simulation from a JSON scenario");
    std::string sim_file, sim_out;
    simc->add_option("--scenario", sim_file, "scenario JSON file")->required();
    simc->add_option("--out", sim_out, "write estimates CSV here (default stdout)");

    // ---- table ----
    auto* table = app.add_subcommand("table", "built-in reference tables");
    std::string tb_id, tb_format = "table";
    bool tb_list = false;
    table->add_option("--id", tb_id);
    table->add_option("--format", tb_format, "table|csv|json");
    table->add_flag("--list", tb_list);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*staff) {
            json j;
            if (staff_model == "mms") {
                if (st_cost > 0.0) {
                    const double beta = qedkit::dim::optimize_cost_beta(st_cost);
                    const double R = st_lambda / st_mu;
                    j["beta_star"] = beta;
                    j["s_srs"] = static_cast<int>(std::llround(R + beta * std::sqrt(R)));
                    j["s_exact"] = qedkit::dim::optimize_cost_exact(R, st_cost);
                } else {
                    const double beta = qedkit::dim::solve_beta_for_delay(st_target);
                    const double R = st_lambda / st_mu;
                    j["beta_star"] = beta;
                    j["s_srs"] = qedkit::dim::staff_constraint(R, st_target);
                    j["s_exact"] = qedkit::dim::staff_exact(R, st_target);
                }
            } else if (staff_model == "cloud") {
                const auto d = qedkit::dim::dimension_cloud(st_lambda, st_kappa, st_eps, st_gamma);
                j["beta_star"] = d.beta_star;
                j["gamma_star"] = d.gamma_star;
                j["s"] = d.s;
                j["n"] = d.n;
            } else if (staff_model == "erlang-r") {
                const auto d = qedkit::dim::dimension_erlang_r(st_lambda, st_mu, st_delta, st_p,
                                                               st_eps, st_gamma);
                j["beta"] = d.beta;
                j["gamma"] = d.gamma;
                j["s"] = d.s;
                j["n"] = d.n;
            } else {
                throw qedkit::domain_error("staff: unknown model " + staff_model);
            }
            print_json(j);
        } else if (*eval) {
            json j;
            if (eval_model == "mms") {
                const auto m = qedkit::mms::mms_metrics({ev_lambda, ev_mu, ev_s});
                j = {{"delay_prob", m.delay_prob},
                     {"expected_wait", m.expected_wait},
                     {"expected_queue", m.expected_queue}};
            } else if (eval_model == "mmsn") {
                const auto m = qedkit::mms::mmsn_metrics({{ev_lambda, ev_mu, ev_s}, ev_n});
                j = {{"delay_prob", m.delay_prob},
                     {"block_prob", m.block_prob},
                     {"expected_wait", m.expected_wait}};
            } else if (eval_model == "erlang-a") {
                const auto m = qedkit::mms::erlang_a_metrics({{ev_lambda, ev_mu, ev_s}, ev_theta});
                j = {{"delay_prob", m.delay_prob},
                     {"abandon_prob", m.abandon_prob},
                     {"expected_wait", m.expected_wait}};
            } else if (eval_model == "erlang-b") {
                j = {{"block_prob", qedkit::mms::erlang_b(ev_lambda / ev_mu, ev_s)}};
            } else if (eval_model == "bulk") {
                const qedkit::bulk::ArrivalLaw law =
                    ev_n == -2 ? qedkit::bulk::ArrivalLaw::gamma_poisson(ev_a, ev_b)
                               : qedkit::bulk::ArrivalLaw::poisson(ev_lambda);
                const qedkit::bulk::BulkSpec spec{law, ev_s};
                const auto rs = qedkit::bulk::find_roots_iter(spec);
                const auto exact = qedkit::bulk::exact_measures_roots(spec, rs);
                const auto pol = qedkit::bulk::pollaczek_measures(spec);
                const auto sp = qedkit::bulk::spitzer_truncated(spec, ev_K);
                j = {{"mean_queue", exact.mean_queue},
                     {"p_empty", exact.p_empty},
                     {"variance_queue", pol.variance_queue},
                     {"pollaczek_mean", pol.mean_queue},
                     {"spitzer_mean_lower", sp.mean_queue_lower},
                     {"root_residual", rs.residual}};
            } else if (eval_model == "erlang-r-blocking") {
                const qedkit::erlang_r::ErlangRSpec spec{ev_lambda, ev_mu, ev_delta,
                                                         ev_p,      ev_s,  ev_n};
                const auto m = qedkit::erlang_r::blocking_measures(spec);
                j = {{"p_delay", m.p_delay},       {"p_block", m.p_block},
                     {"expected_wait", m.expected_wait}, {"rho_s", m.rho_s},
                     {"rho_n", m.rho_n},           {"rho_max", qedkit::erlang_r::stability_rho_max(spec)}};
            } else if (eval_model == "erlang-r-holding") {
                const qedkit::erlang_r::ErlangRSpec spec{ev_lambda, ev_mu, ev_delta,
                                                         ev_p,      ev_s,  ev_n};
                const auto sol = qedkit::erlang_r::qbd_solve(qedkit::erlang_r::qbd_build(spec));
                const auto m = qedkit::erlang_r::holding_measures(sol, spec);
                j = {{"p_delay", m.p_delay},       {"p_hold", m.p_hold},
                     {"expected_wait", m.expected_wait}, {"rho_s", m.rho_s},
                     {"rho_n", m.rho_n},           {"g_residual", sol.residual}};
            } else {
                throw qedkit::domain_error("eval: unknown model " + eval_model);
            }
            print_json(j);
        } else if (*approx) {
            json j;
            if (ap_model == "grw") {
                const auto mi = qedkit::grw::grw_moments_integral({ap_beta});
                j = {{"p0", mi.p0}, {"mean", mi.mean}, {"variance", mi.variance}};
                if (ap_beta < 2.0 * std::sqrt(M_PI) - 1e-6) {
                    const auto ms = qedkit::grw::grw_moments_series({ap_beta});
                    j["series"] = {{"p0", ms.p0}, {"mean", ms.mean}, {"variance", ms.variance}};
                }
            } else if (ap_model == "ht") {
                const qedkit::ht::RegimeSpec spec{ap_eta, ap_g, 1.0, 1.0, ap_s};
                const auto reg = qedkit::ht::classify_regime(spec);
                j["regime"] = reg.tag == qedkit::ht::Regime::Moderate   ? "moderate"
                              : reg.tag == qedkit::ht::Regime::Classical ? "classical"
                                                                         : "extreme";
                j["mean_leading"] = qedkit::ht::mean_leading(spec).value;
                if (ap_eta == 0.5) j["mean_corrected"] = qedkit::ht::mean_corrected_half(spec);
                if (ap_eta >= 0.5 && ap_eta < 1.0) {
                    j["variance_leading"] = qedkit::ht::variance_leading(spec).value;
                    j["p_empty_leading"] = qedkit::ht::empty_prob_leading(spec).value;
                }
            } else if (ap_model == "overdispersion") {
                const qedkit::od::OverdispersedSpec spec{ap_a, ap_b, ap_beta};
                const auto h = qedkit::od::robust_hedge(spec);
                const auto rm = qedkit::od::robust_measures(spec);
                const auto cm = qedkit::od::classic_measures(spec);
                j = {{"beta_n", h.beta_n},
                     {"sigma_tilde", h.sigma_tilde},
                     {"robust", {{"mean", rm.mean_queue}, {"variance", rm.variance_queue},
                                 {"p_empty", rm.p_empty}}},
                     {"classic", {{"mean", cm.mean_queue}, {"variance", cm.variance_queue},
                                  {"p_empty", cm.p_empty}}}};
            } else if (ap_model == "basic" || ap_model == "cloud" || ap_model == "erlang-a") {
                qedkit::retrial::RetrialParams params;
                params.beta = ap_beta;
                params.gamma = ap_gamma;
                params.kappa = ap_kappa;
                params.theta = ap_theta;
                const auto model = ap_model == "basic" ? qedkit::retrial::RetrialModel::Basic
                                   : ap_model == "cloud" ? qedkit::retrial::RetrialModel::Cloud
                                                         : qedkit::retrial::RetrialModel::Abandon;
                if (ap_retrial) {
                    const auto a = qedkit::retrial::approx_with_retrials(model, params, ap_R);
                    j = {{"delay_prob", a.delay_prob},
                         {"loss_prob", a.loss_prob},
                         {"alpha", a.fixed_point.alpha},
                         {"residual", a.fixed_point.residual}};
                } else if (model == qedkit::retrial::RetrialModel::Basic) {
                    const auto lim = qedkit::retrial::finite_queue_limits({ap_beta, ap_gamma});
                    j = {{"g", lim.g}, {"f", lim.f}};
                } else if (model == qedkit::retrial::RetrialModel::Cloud) {
                    const auto lim =
                        qedkit::retrial::cloud_limits({ap_beta, ap_gamma, ap_kappa});
                    j = {{"g", lim.g}, {"f", lim.f}};
                } else {
                    const auto lim = qedkit::retrial::erlang_a_limits(ap_beta, ap_theta);
                    j = {{"g", lim.g}, {"f", lim.f}};
                }
            } else if (ap_model == "erlang-r") {
                const auto lim = qedkit::erlang_r::qed_limits_blocking(ap_r, {ap_beta, ap_gamma});
                j = {{"g", lim.g}, {"f", lim.f}, {"h", lim.h}};
                if (ap_retrial) {
                    const auto hh = qedkit::erlang_r::holding_heuristic(ap_r, {ap_beta, ap_gamma});
                    j["holding"] = {{"alpha", hh.alpha}, {"g", hh.g}, {"h", hh.h}};
                }
            } else {
                throw qedkit::domain_error("approx: unknown model " + ap_model);
            }
            print_json(j);
        } else if (*roots) {
            const qedkit::bulk::ArrivalLaw law =
                rt_dist == "poisson" ? qedkit::bulk::ArrivalLaw::poisson(rt_lambda)
                                     : qedkit::bulk::ArrivalLaw::gamma_poisson(rt_a, rt_b);
            const qedkit::bulk::BulkSpec spec{law, rt_s};
            const auto rs = rt_method == "bl" ? qedkit::bulk::find_roots_bl(spec)
                                              : qedkit::bulk::find_roots_iter(spec);
            json j;
            j["residual"] = rs.residual;
            j["count"] = rs.roots.size();
            for (const auto& z : rs.roots) j["roots"].push_back({z.real(), z.imag()});
            print_json(j);
        } else if (*fit) {
            std::ifstream in(fit_csv);
            if (!in) throw qedkit::domain_error("fit: cannot open " + fit_csv);
            qedkit::od::CountSample sample;
            std::string line;
            bool first = true;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                if (first && fit_header) {
                    first = false;
                    continue;
                }
                first = false;
                sample.counts.push_back(std::stoll(line));
            }
            json j;
            j["n_obs"] = sample.n_obs();
            j["sample_mean"] = sample.sample_mean();
            j["sample_variance"] = sample.sample_variance();
            const auto d = qedkit::od::dispersion_test(sample, fit_alpha);
            const auto ns = qedkit::od::neyman_scott_test(sample, fit_alpha);
            j["dispersion_test"] = {{"statistic", d.statistic},
                                    {"p_value", d.p_value},
                                    {"reject_poisson", d.reject}};
            j["neyman_scott_test"] = {{"statistic", ns.statistic},
                                      {"p_value", ns.p_value},
                                      {"reject_poisson", ns.reject}};
            const auto f = qedkit::od::fit_gamma_poisson(sample);
            if (f.applicable) {
                j["fit"] = {{"a_hat", f.a_hat}, {"b_hat", f.b_hat}, {"loglik", f.loglik}};
                if (fit_boot) {
                    const auto g = qedkit::od::bootstrap_gof(sample, fit_boot_reps,
                                                             seed_from_env(20170301ULL));
                    j["bootstrap_gof"] = {{"statistic", g.statistic},
                                          {"p_value", g.p_value},
                                          {"replications", g.replications}};
                }
            } else {
                j["fit"] = "inapplicable (sample not overdispersed)";
            }
            print_json(j);
        } else if (*simc) {
            std::ifstream in(sim_file);
            if (!in) throw qedkit::domain_error("simulate: cannot open " + sim_file);
            std::stringstream buf;
            buf << in.rdbuf();
            qedkit::sim::SimScenario sc = qedkit::sim::SimScenario::from_json(buf.str());
            sc.seed = seed_from_env(sc.seed);
            const auto estimates = qedkit::sim::simulate(sc);
            const std::string csv = qedkit::sim::estimates_to_csv(estimates);
            if (sim_out.empty()) {
                std::cout << csv;
            } else {
                std::ofstream out(sim_out);
                out << csv;
            }
        } else if (*table) {
            if (tb_list || tb_id.empty()) {
                for (const auto& id : qedkit::tables::table_ids()) std::cout << id << "\n";
            } else {
                print_table(qedkit::tables::build(tb_id), tb_format);
            }
        }
    } catch (const qedkit::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
