/*
   Copyright 2026 The weildesc authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// atlas: command-line harness for exact point counts on Artin-Schreier and
// Kummer curves over finite-field towers.
//
// Exit codes: 0 = all identities hold and all hypothesis-passing instances
// satisfy their theorem bounds; 1 = a violation; 2 = configuration or
// budget error.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "weildesc/weildesc.hpp"

namespace {

using namespace weildesc;

void add_common_options(CLI::App* cmd, ExperimentConfig& cfg, std::string& config_path, std::string& d_spec) {
    cmd->add_option("--config", config_path, "flat key=value config file (flags override it)");
    cmd->add_option("--field", cfg.field, "base field k: p^n or p;n;c0,..,1 (comma list for sweeps)");
    cmd->add_option("--ext", cfg.ext, "extension degree r (comma list for sweeps)");
    cmd->add_option("--poly", cfg.poly, "polynomial f over k_r in text form");
    cmd->add_option("--e", cfg.e_list, "Kummer parameter e | q-1 (comma list; empty = all divisors)");
    cmd->add_option("--n-vars", cfg.nvars, "number of variables of f (hypersurface mode)");
    cmd->add_option("--d", d_spec, "degree or degree range for sweeps, e.g. 3 or 2..4");
    cmd->add_option("--m", cfg.m_list, "m values for the non-vanishing identity (comma list)");
    cmd->add_option("--samples", cfg.samples, "random polynomials per sweep cell");
    cmd->add_option("--seed", cfg.seed, "RNG seed (identical config+seed => identical report bytes)");
    cmd->add_option("--basis", cfg.basis, "basis of k_r over k: power or random:<i>");
    cmd->add_flag("--condition", cfg.condition_hypotheses, "rejection-sample f until the theorem hypotheses hold");
    cmd->add_option("--budget", cfg.budget, "enumeration budget (max points per count)");
    cmd->add_option("--workers", cfg.workers, "worker threads for counting loops");
    cmd->add_option("--out", cfg.out, "output path (default: stdout)");
    cmd->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--timings", cfg.timings, "include wall-clock timings in reports (breaks byte-determinism)");
}

void emit(const ExperimentConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output path '" + cfg.out + "'");
    out << text;
}

int emit_single(const ExperimentConfig& cfg, RunMode mode) {
    CountReport rep = run_single(cfg, mode);
    if (cfg.format == "csv")
        emit(cfg, csv_header() + "\n" + csv_row(rep) + "\n");
    else
        emit(cfg, to_json(rep, cfg.timings).dump(2) + "\n");
    if (!rep.identity_ok) return 1;
    bool theorem_violated = false;
    for (const auto& bl : rep.bound_lines)
        if (bl.within && !*bl.within && !rep.exempt) theorem_violated = true;
    return theorem_violated ? 1 : 0;
}

int run(int argc, char** argv) {
    CLI::App app{"atlas: exact point counts, descent forms, certificates and bound checks for curves over "
                 "finite-field towers"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string config_path;
    std::string d_spec;
    std::string descend_kind = "S";
    std::string certify_mode = "as";

    auto* c_as = app.add_subcommand("count-as", "count points on y^q - y = f(x) and verify the trace identity");
    auto* c_hyper = app.add_subcommand("count-as-hyper", "count points on y^q - y = f(x1,..,xn)");
    auto* c_kummer = app.add_subcommand("count-kummer", "count points on y^{(q-1)/e} = f(x) and verify the norm identity");
    auto* c_descend = app.add_subcommand("descend", "print the descent polynomial S or T with provenance");
    auto* c_certify = app.add_subcommand("certify", "print hypothesis certificates as JSON");
    auto* c_sweep = app.add_subcommand("sweep", "seeded random sweep over a parameter grid");
    auto* c_counter = app.add_subcommand("counterexamples", "replicate the closed-form counterexample families");

    for (auto* cmd : {c_as, c_hyper, c_kummer, c_descend, c_certify, c_sweep, c_counter})
        add_common_options(cmd, cfg, config_path, d_spec);
    c_descend->add_option("--kind", descend_kind, "S (additive), T (multiplicative) or S-multi")
        ->check(CLI::IsMember({"S", "T", "S-multi"}));
    c_certify->add_option("--mode", certify_mode, "as | kummer | deligne | as-hyper")
        ->check(CLI::IsMember({"as", "kummer", "deligne", "as-hyper"}));

    // flags override the config file: load the file first, then re-parse argv
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            for (const auto& [k, v] : parse_config_file(argv[i + 1])) apply_config_entry(cfg, k, v);
            break;
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (!d_spec.empty()) apply_config_entry(cfg, "d", d_spec);

    if (c_as->parsed()) return emit_single(cfg, RunMode::as_curve);
    if (c_hyper->parsed()) return emit_single(cfg, RunMode::as_hyper);
    if (c_kummer->parsed()) return emit_single(cfg, RunMode::kummer);

    if (c_descend->parsed()) {
        FieldPtr k = FieldLevel::parse_spec(cfg.field, cfg.budget);
        FieldTower t = build_extension(k, static_cast<std::uint32_t>(std::stoul(cfg.ext)), cfg.budget);
        Basis B = basis_from_config(cfg, t);
        if (cfg.poly.empty()) throw std::invalid_argument("descend needs --poly");
        if (descend_kind == "S-multi") {
            emit(cfg, as_descent_multivar(MultiPoly::parse(t.kr, cfg.nvars, cfg.poly), t, B).to_string());
        } else {
            UniPoly f = UniPoly::parse(t.kr, cfg.poly);
            emit(cfg, (descend_kind == "T" ? kummer_descent(f, t, B) : as_descent(f, t, B)).to_string());
        }
        return 0;
    }

    if (c_certify->parsed()) {
        FieldPtr k = FieldLevel::parse_spec(cfg.field, cfg.budget);
        FieldTower t = build_extension(k, static_cast<std::uint32_t>(std::stoul(cfg.ext)), cfg.budget);
        if (cfg.poly.empty()) throw std::invalid_argument("certify needs --poly");
        ordered_json out = ordered_json::array();
        if (certify_mode == "as") {
            UniPoly f = UniPoly::parse(t.kr, cfg.poly);
            out.push_back(to_json(check_degree_prime_to_p(f)));
            out.push_back(to_json(split_form_nonsingular(f, t, cfg.budget)));
        } else if (certify_mode == "kummer") {
            UniPoly f = UniPoly::parse(t.kr, cfg.poly);
            auto es = cfg.e_list.empty() ? std::vector<std::uint32_t>{1} : detail::parse_u32_list(cfg.e_list);
            for (auto e : es) out.push_back(to_json(kummer_hypotheses(f, e, t)));
        } else if (certify_mode == "deligne") {
            out.push_back(to_json(is_deligne(MultiPoly::parse(t.kr, cfg.nvars, cfg.poly), 4, cfg.budget)));
        } else {  // as-hyper
            MultiPoly f = MultiPoly::parse(t.kr, cfg.nvars, cfg.poly);
            out.push_back(to_json(is_deligne(f, 4, cfg.budget)));
            out.push_back(to_json(split_form_nonsingular_multivar(f, t, 4, cfg.budget)));
        }
        emit(cfg, out.dump(2) + "\n");
        return 0;
    }

    SweepOutcome outcome = c_sweep->parsed() ? run_sweep(cfg) : run_counterexamples(cfg);
    emit(cfg, cfg.format == "csv" ? outcome.csv_text : outcome.json_text);
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const weildesc::identity_violation& e) {
        std::cerr << "identity violation: " << e.what() << std::endl;
        return 1;
    } catch (const weildesc::budget_error& e) {
        std::cerr << "budget error: " << e.what() << std::endl;
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}
