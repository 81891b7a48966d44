// Command-line front end: evaluates norms, constants, expansions and the
// Monte Carlo estimators, and emits plot-ready CSV or JSON reports.
//
// Exit codes: 0 success, 1 usage error, 2 validation failure (bad
// parameter ranges or a failed verification), 3 quadrature non-convergence.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fbmh/acceptance.hpp"
#include "fbmh/expansions.hpp"
#include "fbmh/fousim.hpp"
#include "fbmh/ftnorm.hpp"
#include "fbmh/hilbert.hpp"
#include "fbmh/report.hpp"

namespace {

using fbmh::HurstParam;
using fbmh::report::Table;

struct Output {
    std::string path;
    std::string format = "json";
    bool no_timestamp = false;

    void emit(const Table& table, const std::string& command, nlohmann::json extra = {}) const {
        if (format == "csv") {
            fbmh::report::write_output(fbmh::report::to_csv(table, !no_timestamp), path);
            return;
        }
        nlohmann::json doc;
        doc["command"] = command;
        if (!no_timestamp) doc["generated_at"] = fbmh::report::timestamp_utc();
        for (auto& [k, v] : extra.items()) doc[k] = v;
        doc["rows"] = fbmh::report::to_json_rows(table);
        fbmh::report::write_output(doc.dump(2) + "\n", path);
    }
};

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        const std::string tok = s.substr(pos, comma - pos);
        if (!tok.empty()) out.push_back(std::stod(tok));
        pos = comma + 1;
    }
    if (out.empty()) throw std::domain_error("empty T grid");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1]) throw std::domain_error("T grid must be strictly increasing");
    return out;
}

fbmh::numerics::QuadratureSpec spec_from_tol(double tol, std::size_t budget) {
    return {tol, std::max(tol * 1e-2, 1e-14), budget};
}

int cmd_norm(double H, const std::vector<double>& ts, double tol, const Output& out) {
    const HurstParam h(H);
    const auto spec = spec_from_tol(tol, 40'000'000);
    Table t;
    switch (h.branch()) {
        case fbmh::HurstBranch::brownian: t.header = {"T", "branch", "total", "closed_form"}; break;
        case fbmh::HurstBranch::lowH: t.header = {"T", "branch", "total", "I1", "I2", "I3"}; break;
        case fbmh::HurstBranch::highH:
            t.header = {"T", "branch", "total", "J1", "J2bar", "L23pair"};
            break;
    }
    for (double T : ts) {
        const auto c = fbmh::ftnorm::norm_fT_sq(T, h, spec);
        switch (c.branch) {
            case fbmh::HurstBranch::brownian:
                t.add_row({T, std::string(branch_name(c.branch)), c.total, c.closed_form});
                break;
            case fbmh::HurstBranch::lowH:
                t.add_row({T, std::string(branch_name(c.branch)), c.total, c.i1, c.i2, c.i3});
                break;
            case fbmh::HurstBranch::highH:
                t.add_row({T, std::string(branch_name(c.branch)), c.total, c.j1, c.j2bar, c.l23pair});
                break;
        }
    }
    out.emit(t, "norm", {{"H", H}, {"tol", tol}});
    return 0;
}

int cmd_constants(double H, const Output& out) {
    const auto sc = fbmh::expansions::sigma_consts(HurstParam(H));
    Table t;
    t.header = {"H", "a", "sigmaH2", "sigma2"};
    t.add_row({H, sc.a, sc.sigmaH2, sc.sigma2});
    out.emit(t, "constants");
    return 0;
}

int cmd_expand(double H, const std::vector<double>& ts, const Output& out) {
    Table t;
    t.header = {"T", "value", "remainder_exponent"};
    nlohmann::json terms = nlohmann::json::array();
    for (double T : ts) {
        const auto e = fbmh::expansions::theorem_expansion(T, HurstParam(H));
        t.add_row({T, e.value, e.remainder_exponent});
        if (terms.empty())
            for (const auto& term : e.terms)
                terms.push_back({{"label", term.label},
                                 {"coefficient", term.coefficient},
                                 {"T_exponent", term.t_exponent},
                                 {"has_log", term.has_log}});
    }
    out.emit(t, "expand", {{"H", H}, {"terms", terms}});
    return 0;
}

int cmd_decay(double H, const std::vector<double>& ts, double tol, const Output& out) {
    const auto rows = fbmh::expansions::decay_check(HurstParam(H), ts, spec_from_tol(tol, 40'000'000));
    Table t;
    t.header = {"T", "norm_over_2T", "residual", "scaled_residual"};
    for (const auto& r : rows) t.add_row({r.T, r.norm_over_2T, r.residual, r.scaled_residual});
    out.emit(t, "decay", {{"H", H}});
    return 0;
}

int cmd_asymptote(double H, const Output& out) {
    const auto p = fbmh::expansions::asymptote_params(HurstParam(H));
    Table t;
    t.header = {"H", "slope", "intercept"};
    t.add_row({H, p.slope, p.intercept});
    out.emit(t, "asymptote");
    return 0;
}

int cmd_lemma(const std::string& id_name, double beta, double H, const std::vector<double>& ts,
              double tol, const Output& out) {
    using fbmh::expansions::LemmaId;
    const LemmaId id = fbmh::expansions::lemma_from_name(id_name);
    double param = 0.0;
    if (id == LemmaId::A2 || id == LemmaId::A3 || id == LemmaId::A5) {
        if (std::isnan(beta)) throw std::domain_error("lemma " + id_name + " needs --beta");
        param = beta;
    } else if (id == LemmaId::L1 || id == LemmaId::L2) {
        if (std::isnan(H)) throw std::domain_error("lemma " + id_name + " needs --H");
        param = H;
    }
    Table t;
    t.header = {"T", "expansion", "oracle", "residual", "scaled_residual"};
    for (double T : ts) {
        const auto e = fbmh::expansions::lemma_expansion(id, T, param);
        const double oracle = fbmh::expansions::lemma_oracle(id, T, param, spec_from_tol(tol, 40'000'000));
        const double resid = oracle - e.value;
        t.add_row({T, e.value, oracle, resid,
                   std::abs(resid) * std::pow(T, -e.remainder_exponent)});
    }
    out.emit(t, "lemma",
             {{"lemma", id_name}, {"param", param},
              {"remainder_exponent",
               fbmh::expansions::lemma_expansion(id, ts.front(), param).remainder_exponent}});
    return 0;
}

int cmd_mc_wt(double H, double T, std::size_t paths, std::size_t steps, std::uint64_t seed,
              const Output& out) {
    fbmh::fousim::McConfig cfg{seed, steps, paths, T, HurstParam(H), 1.0};
    const auto est = fbmh::fousim::mc_wt_variance(cfg);
    const double s2 = fbmh::expansions::sigma_consts(HurstParam(H)).sigma2;
    Table t;
    t.header = {"H", "T", "paths", "steps", "seed", "mean", "std_error", "sigma2", "abs_gap", "z"};
    t.add_row({H, T, static_cast<long long>(paths), static_cast<long long>(steps),
               static_cast<long long>(seed), est.mean, est.std_error, s2,
               std::abs(est.mean - s2), (est.mean - s2) / est.std_error});
    out.emit(t, "mc-wt");
    return 0;
}

int cmd_rho_integral(double H, double rmax, const Output& out) {
    const auto r = fbmh::fousim::rho_sq_integral(HurstParam(H), rmax);
    const double want = fbmh::expansions::sigma_consts(HurstParam(H)).sigma2 / 4.0;
    Table t;
    t.header = {"H", "r_max", "value", "tail_estimate", "tail_warning", "sigma2_over_4", "rel_gap"};
    t.add_row({H, r.r_max, r.value, r.tail_estimate, static_cast<long long>(r.tail_warning), want,
               std::abs(r.value + r.tail_estimate - want) / want});
    out.emit(t, "rho-integral");
    return 0;
}

int cmd_verify_all(std::uint64_t seed, const Output& out) {
    Table t;
    t.header = {"id", "name", "pass", "seconds", "detail"};
    bool all = true;
    for (int id = 1; id <= 10; ++id) {
        const auto r = fbmh::acceptance::run_criterion(id, seed);
        fbmh::acceptance::print_result(r);
        all = all && r.pass;
        t.add_row({static_cast<long long>(r.id), r.name, static_cast<long long>(r.pass), r.seconds,
                   r.detail});
    }
    if (!out.path.empty()) out.emit(t, "verify-all", {{"seed", seed}});
    std::cout << (all ? "all criteria passed\n" : "SOME CRITERIA FAILED\n");
    return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"norms, expansions and simulations in the canonical Hilbert space of fBm"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.set_config("--config", "", "flat key=value config file; flags take precedence");

    std::string out_path, format = "json", t_list = "10", lemma_id;
    bool no_timestamp = false;
    double H = std::numeric_limits<double>::quiet_NaN();
    double beta = std::numeric_limits<double>::quiet_NaN();
    double tol = 1e-10, rmax = 0.0;
    std::size_t paths = 2000, steps = 4096;
    std::uint64_t seed = fbmh::acceptance::kDefaultMcSeed;

    // every flag lives on the top level so a flat key=value config file can
    // set any of them; subcommands only select the command
    app.add_option("--H", H, "Hurst parameter in (0,1)");
    app.add_option("--T", t_list, "horizon or comma-separated increasing grid")
        ->capture_default_str();
    app.add_option("--beta", beta, "exponent for lemmas A2/A3/A5");
    app.add_option("--lemma", lemma_id, "A2|A3|A4|A5|L1|L2|L2_34");
    app.add_option("--paths", paths, "Monte Carlo path count")->capture_default_str();
    app.add_option("--steps", steps, "Monte Carlo steps (power of two)")->capture_default_str();
    app.add_option("--seed", seed, "RNG seed")->capture_default_str();
    app.add_option("--tol", tol, "quadrature relative tolerance")->capture_default_str();
    app.add_option("--rmax", rmax, "rho-integral cutoff (default 60 for H<=1/2, 200 above)");
    app.add_option("--out", out_path, "output path (default stdout)")->capture_default_str();
    app.add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_flag("--no-timestamp", no_timestamp, "suppress the timestamp line/field");

    auto* norm = app.add_subcommand("norm", "||f_T||^2 via the exact reductions");
    auto* constants = app.add_subcommand("constants", "a, sigma_H^2, sigma^2");
    auto* expand = app.add_subcommand("expand", "asymptotic expansion of ||f_T||^2");
    auto* decay = app.add_subcommand("decay", "scaled residuals of norm/2T against sigma^2");
    auto* asym = app.add_subcommand("asymptote", "oblique asymptote slope and intercept");
    auto* lemma = app.add_subcommand("lemma", "auxiliary expansion vs quadrature oracle");
    auto* mc = app.add_subcommand("mc-wt", "Monte Carlo E[W_T^2]");
    auto* rho = app.add_subcommand("rho-integral", "int_0^inf rho^2 against sigma^2/4");
    auto* verify = app.add_subcommand("verify-all", "run the verification suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    Output out{out_path, format, no_timestamp};
    try {
        auto need_H = [&] {
            if (std::isnan(H)) throw std::domain_error("this command needs --H");
            return H;
        };
        if (*norm) return cmd_norm(need_H(), parse_grid(t_list), tol, out);
        if (*constants) return cmd_constants(need_H(), out);
        if (*expand) return cmd_expand(need_H(), parse_grid(t_list), out);
        if (*decay) return cmd_decay(need_H(), parse_grid(t_list), tol, out);
        if (*asym) return cmd_asymptote(need_H(), out);
        if (*lemma) {
            if (lemma_id.empty()) throw std::domain_error("lemma needs --lemma");
            return cmd_lemma(lemma_id, beta, H, parse_grid(t_list), tol, out);
        }
        if (*mc) return cmd_mc_wt(need_H(), parse_grid(t_list).front(), paths, steps, seed, out);
        if (*rho) return cmd_rho_integral(need_H(), rmax, out);
        if (*verify) return cmd_verify_all(seed, out);
    } catch (const fbmh::numerics::NonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
