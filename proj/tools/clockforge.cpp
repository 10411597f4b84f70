// clockforge: exact and asymptotic single-shot qubit-clock coherence
// distillation under time-translation-invariant operations.
//
// Subcommands: solve, sweep, moments, schur, bounds, perturb, compare.
// Exit codes: 0 ok, 2 usage error, 3 numerical failure.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "clockforge/asymptotic.hpp"
#include "clockforge/baselines.hpp"
#include "clockforge/params.hpp"
#include "clockforge/pband.hpp"
#include "clockforge/protocol.hpp"
#include "clockforge/report.hpp"
#include "clockforge/schur.hpp"
#include "clockforge/solver.hpp"

namespace {

using clockforge::fmt17;

constexpr double kDegToRad = std::numbers::pi / 180.0;

using Cell = std::variant<std::string, long long, double, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string cell_to_csv(const Cell& c) {
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<bool>(c)) return std::get<bool>(c) ? "true" : "false";
    double v = std::get<double>(c);
    if (std::isnan(v)) return "";
    return fmt17(v);
}

nlohmann::json cell_to_json(const Cell& c) {
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
    if (std::holds_alternative<bool>(c)) return std::get<bool>(c);
    double v = std::get<double>(c);
    if (std::isnan(v)) return nullptr;
    return v;
}

std::string render_table(const Table& t, const std::string& format) {
    if (format == "json") {
        nlohmann::json doc;
        doc["schema"] = 1;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : t.rows) {
            nlohmann::json r;
            for (std::size_t i = 0; i < t.columns.size(); ++i) r[t.columns[i]] = cell_to_json(row[i]);
            rows.push_back(std::move(r));
        }
        doc["rows"] = std::move(rows);
        return doc.dump(2) + "\n";
    }
    std::string out = "# schema: 1\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += t.columns[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += cell_to_csv(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw CLI::ValidationError("--out", "cannot open '" + path + "' for writing");
    file << text;
}

std::vector<double> parse_real_list(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double lo, hi;
        int count;
        char c1, c2;
        std::istringstream in(spec);
        if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1)
            throw CLI::ValidationError("grid", "expected lo:hi:count in '" + spec + "'");
        for (int i = 0; i < count; ++i)
            out.push_back(count == 1 ? lo : lo + (hi - lo) * i / static_cast<double>(count - 1));
        return out;
    }
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw CLI::ValidationError("grid", "empty list '" + spec + "'");
    return out;
}

std::vector<int> parse_int_list(const std::string& spec) {
    std::vector<int> out;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    if (out.empty()) throw CLI::ValidationError("grid", "empty list '" + spec + "'");
    return out;
}

std::vector<clockforge::Family> parse_families(const std::string& spec) {
    std::vector<clockforge::Family> out;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        auto f = clockforge::family_from_name(item);
        if (!f) throw CLI::ValidationError("--families", "unknown family '" + item + "'");
        out.push_back(*f);
    }
    if (out.empty()) throw CLI::ValidationError("--families", "no families given");
    return out;
}

int jobs_or_env(int jobs_flag) {
    if (jobs_flag > 0) return jobs_flag;
    if (const char* env = std::getenv("CLOCKFORGE_JOBS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;  // hardware concurrency
}

Table sweep_table(const std::vector<clockforge::SweepRow>& rows) {
    Table t;
    t.columns = {"family", "n",        "lambda",      "theta_in_deg", "theta_out_deg",
                 "infid",  "n_infid",  "series",      "lower_bound",  "skipped_mass"};
    for (const auto& r : rows) {
        t.rows.push_back({r.family, static_cast<long long>(r.n), r.lambda,
                          r.theta_in / kDegToRad, r.theta_out / kDegToRad, r.infid,
                          r.n_times_infid, r.series, r.lower_bound, r.skipped_mass});
    }
    return t;
}

struct CommonFlags {
    double lambda = 0.8;
    double theta_in_deg = 90.0;
    double theta_out_deg = 90.0;
    double tol = 1e-12;
    std::string format = "csv";
    std::string out;
    int jobs = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_angles = true) {
    cmd->add_option("--lambda", f.lambda, "purity parameter in (0,1]")->required();
    if (with_angles) {
        cmd->add_option("--theta-in", f.theta_in_deg, "input polar angle, degrees (default 90)");
        cmd->add_option("--theta-out", f.theta_out_deg, "target polar angle, degrees (default 90)");
    }
    cmd->add_option("--tol", f.tol, "solver tolerance (default 1e-12)");
    cmd->add_option("--format", f.format, "output format: csv or json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", f.out, "output path (default stdout)");
    cmd->add_option("--jobs", f.jobs, "worker threads (default: CLOCKFORGE_JOBS or hardware)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal qubit-clock coherence distillation toolkit"};
    app.require_subcommand(1);

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "solve one Schur outcome for an optimal protocol");
    CommonFlags sf;
    int solve_nc = 0;
    bool exact_odd = false;
    std::string solve_family = "exact";
    long solve_max_sweeps = 100000;
    solve->add_option("--nc", solve_nc, "number of post-Schur qubits N_C")->required();
    solve->add_flag("--exact-odd", exact_odd, "use the closed-form equatorial odd-N_C solution");
    solve->add_option("--family", solve_family,
                      "protocol family: exact, exact-odd, order1, order2, order3eq, discard, eb, "
                      "perturb");
    solve->add_option("--max-sweeps", solve_max_sweeps, "coordinate-ascent sweep budget");
    add_common(solve, sf);

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "evaluate families over an (N, lambda) grid");
    CommonFlags wf;
    std::string sweep_families = "order1,eb,discard";
    std::string sweep_ns = "101";
    std::string sweep_lambdas;
    sweep->add_option("--families", sweep_families, "comma list of protocol families");
    sweep->add_option("--ns", sweep_ns, "comma list of copy counts N");
    sweep->add_option("--lambdas", sweep_lambdas, "comma list or lo:hi:count grid")->required();
    sweep->add_option("--theta-in", wf.theta_in_deg, "input polar angle, degrees");
    sweep->add_option("--theta-out", wf.theta_out_deg, "target polar angle, degrees");
    sweep->add_option("--tol", wf.tol, "solver tolerance");
    sweep->add_option("--format", wf.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--out", wf.out, "output path");
    sweep->add_option("--jobs", wf.jobs, "worker threads");

    // ---- moments ----
    auto* moments = app.add_subcommand("moments", "band centered moments: exact vs series");
    CommonFlags mf;
    int mom_nc = 0, mom_alpha = 0, mom_p = 2;
    bool mom_fit = false;
    moments->add_option("--nc", mom_nc, "number of post-Schur qubits N_C")->required();
    moments->add_option("--alpha", mom_alpha, "band offset: 0 or 1")->required();
    moments->add_option("--p", mom_p, "moment order")->required();
    moments->add_flag("--fit", mom_fit, "also evaluate at 2 N_C and fit the residual decay");
    add_common(moments, mf);

    // ---- schur ----
    auto* schur = app.add_subcommand("schur", "Schur sampling outcome distribution");
    CommonFlags hf;
    int schur_n = 0;
    schur->add_option("--n", schur_n, "number of input copies N")->required();
    add_common(schur, hf, /*with_angles=*/false);

    // ---- bounds ----
    auto* bounds = app.add_subcommand("bounds", "purity-of-coherence bounds and resources");
    CommonFlags bf;
    int bounds_n = 0;
    double bounds_delta = -1.0;
    bounds->add_option("--n", bounds_n, "copy count for the finite-N equatorial bound");
    bounds->add_option("--delta", bounds_delta, "infidelity for the near-pure P_H bound");
    add_common(bounds, bf);

    // ---- perturb ----
    auto* perturb = app.add_subcommand("perturb", "low-noise perturbative protocol");
    CommonFlags pf;
    int pert_nc = 0;
    double pert_c0 = 0.0;
    bool pert_compare = false;
    perturb->add_option("--nc", pert_nc, "number of post-Schur qubits N_C")->required();
    perturb->add_option("--c0", pert_c0, "noise parameter c0 = (1 - lambda)/2")->required();
    perturb->add_flag("--compare-exact", pert_compare, "report max |s - s_exact|");
    perturb->add_option("--tol", pf.tol, "solver tolerance");
    perturb->add_option("--format", pf.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    perturb->add_option("--out", pf.out, "output path");

    // ---- compare ----
    auto* compare = app.add_subcommand("compare", "evaluate several families at one point");
    CommonFlags cf;
    int compare_n = 0;
    std::string compare_families = "exact,order1,eb,discard";
    compare->add_option("--n", compare_n, "number of input copies N")->required();
    compare->add_option("--families", compare_families, "comma list of protocol families");
    add_common(compare, cf);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*solve) {
            clockforge::ClockParams params(std::max(solve_nc, 1), sf.lambda,
                                           sf.theta_in_deg * kDegToRad,
                                           sf.theta_out_deg * kDegToRad);
            auto family = clockforge::family_from_name(solve_family);
            if (!family) throw CLI::ValidationError("--family", "unknown family");
            if (exact_odd) family = clockforge::Family::exact_odd;
            clockforge::ProtocolAngles proto;
            if (*family == clockforge::Family::exact && solve_nc > 1) {
                clockforge::SolveOptions opt;
                opt.tol = sf.tol;
                opt.max_sweeps = solve_max_sweeps;
                proto = clockforge::solve_optimal(solve_nc, params, opt);
            } else {
                proto = clockforge::protocol_for_family(*family, solve_nc, params, sf.tol);
            }

            std::string proto_text = sf.format == "json" ? clockforge::protocol_to_json(proto) + "\n"
                                                         : clockforge::protocol_to_csv(proto);
            clockforge::SolveSummary summary = clockforge::solve_summary(proto, params);
            Table t;
            t.columns = {"n_c",     "lambda",       "theta_in_deg", "theta_out_deg", "family",
                         "fidelity", "infidelity",  "stationarity_residual", "is_ppt",
                         "lambda_tilde"};
            t.rows.push_back({static_cast<long long>(summary.n_c), sf.lambda, sf.theta_in_deg,
                              sf.theta_out_deg, std::string(clockforge::family_name(*family)),
                              summary.fid, summary.infid, summary.stationarity_residual,
                              summary.ppt, summary.lambda_tilde});
            if (!sf.out.empty() && sf.out != "-") {
                write_text(sf.out, proto_text);
                std::cout << render_table(t, sf.format);
            } else {
                std::cout << proto_text;
                std::cerr << render_table(t, sf.format);
            }
        } else if (*sweep) {
            auto families = parse_families(sweep_families);
            auto ns = parse_int_list(sweep_ns);
            auto lambdas = parse_real_list(sweep_lambdas);
            auto rows = clockforge::sweep_rows(families, ns, lambdas, wf.theta_in_deg * kDegToRad,
                                               wf.theta_out_deg * kDegToRad, wf.tol,
                                               jobs_or_env(wf.jobs));
            write_text(wf.out, render_table(sweep_table(rows), wf.format));
        } else if (*moments) {
            clockforge::ClockParams params(std::max(mom_nc, 1), mf.lambda,
                                           mf.theta_in_deg * kDegToRad,
                                           mf.theta_out_deg * kDegToRad);
            Table t;
            t.columns = {"n_c", "lambda", "theta_in_deg", "alpha", "p", "exact", "series",
                         "residual"};
            if (mom_fit) t.columns.push_back("fitted_decay_exponent");
            auto eval = [&](int nc) {
                clockforge::PBand band = clockforge::p_band(nc, params);
                double exact = clockforge::centered_moment_exact(band, mom_alpha, mom_p);
                double series = clockforge::centered_moment_series(nc, params, mom_alpha, mom_p);
                return std::pair<double, double>(exact, series);
            };
            auto [exact, series] = eval(mom_nc);
            std::vector<Cell> row{static_cast<long long>(mom_nc), mf.lambda, mf.theta_in_deg,
                                  static_cast<long long>(mom_alpha), static_cast<long long>(mom_p),
                                  exact, series, exact - series};
            if (mom_fit) {
                auto [exact2, series2] = eval(2 * mom_nc);
                double r1 = std::abs(exact - series), r2 = std::abs(exact2 - series2);
                row.push_back(r2 > 0.0 ? std::log2(r1 / r2)
                                       : std::numeric_limits<double>::quiet_NaN());
            }
            t.rows.push_back(std::move(row));
            write_text(mf.out, render_table(t, mf.format));
        } else if (*schur) {
            clockforge::ClockParams params(schur_n, hf.lambda, std::numbers::pi / 2,
                                           std::numbers::pi / 2);
            clockforge::SchurDistribution dist = clockforge::schur_distribution(params);
            Table t;
            t.columns = {"n", "lambda", "n_c", "d", "prob"};
            for (const auto& o : dist.outcomes)
                t.rows.push_back({static_cast<long long>(schur_n), hf.lambda,
                                  static_cast<long long>(o.n_c), o.d, o.prob});
            write_text(hf.out, render_table(t, hf.format));
        } else if (*bounds) {
            int n_for_params = bounds_n > 0 ? bounds_n : 1;
            clockforge::ClockParams params(n_for_params, bf.lambda, bf.theta_in_deg * kDegToRad,
                                           bf.theta_out_deg * kDegToRad);
            clockforge::PerQubitResources res = clockforge::per_qubit_resources(params);
            Table t;
            t.columns = {"lambda",       "theta_in_deg", "theta_out_deg", "delta1_lower_bound",
                         "ph_per_qubit", "vh_target",    "finite_n_bound", "near_pure_ph_bound"};
            double finite_bound = std::numeric_limits<double>::quiet_NaN();
            if (bounds_n > 0 && params.is_equatorial())
                finite_bound = clockforge::equatorial_symmetry_lower_bound(bounds_n, bf.lambda);
            double near_pure = std::numeric_limits<double>::quiet_NaN();
            if (bounds_delta >= 0.0) {
                auto b = clockforge::ph_near_pure_bound(res.vh, bounds_delta);
                near_pure = b.infinite ? std::numeric_limits<double>::infinity() : b.value;
            }
            t.rows.push_back({bf.lambda, bf.theta_in_deg, bf.theta_out_deg,
                              clockforge::infidelity_factor_lower_bound(params),
                              res.ph_infinite ? std::numeric_limits<double>::infinity() : res.ph,
                              res.vh, finite_bound, near_pure});
            write_text(bf.out, render_table(t, bf.format));
        } else if (*perturb) {
            clockforge::PerturbativeProtocol pp = clockforge::perturbative_protocol(pert_nc, pert_c0);
            Table t;
            t.columns = {"n_c", "c0", "w", "s_w", "second_order_dropped"};
            for (int w = 0; w <= pert_nc; ++w)
                t.rows.push_back({static_cast<long long>(pert_nc), pert_c0,
                                  static_cast<long long>(w),
                                  pp.proto.s[static_cast<std::size_t>(w)],
                                  pp.second_order_dropped});
            if (pert_compare) {
                double lambda = 1.0 - 2.0 * pert_c0;
                clockforge::ProtocolAngles exact =
                    pert_nc % 2 == 1 && pert_nc >= 3
                        ? clockforge::solve_equatorial_odd_exact(pert_nc, lambda)
                        : clockforge::solve_optimal(
                              pert_nc, clockforge::ClockParams::equatorial(pert_nc, lambda),
                              clockforge::SolveOptions{pf.tol, 100000, std::nullopt});
                double max_diff = 0.0;
                for (std::size_t i = 0; i < exact.s.size(); ++i)
                    max_diff = std::max(max_diff, std::abs(exact.s[i] - pp.proto.s[i]));
                t.columns.push_back("max_abs_diff_vs_exact");
                for (auto& row : t.rows) row.push_back(max_diff);
            }
            write_text(pf.out, render_table(t, pf.format));
        } else if (*compare) {
            auto families = parse_families(compare_families);
            auto rows = clockforge::sweep_rows(families, {compare_n}, {cf.lambda},
                                               cf.theta_in_deg * kDegToRad,
                                               cf.theta_out_deg * kDegToRad, cf.tol,
                                               jobs_or_env(cf.jobs));
            write_text(cf.out, render_table(sweep_table(rows), cf.format));
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const clockforge::SolveError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
