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

/**
 * @file report.hpp
 * @brief CountReport and its JSON / CSV serialization.
 *
 * Reports are deterministic byte-for-byte for a fixed configuration: big
 * integers are emitted as strings, decimals through fixed 6-digit
 * formatting, maps in index order.  Wall-clock timings are kept on the
 * struct but only serialized on request, so default reports stay
 * reproducible.
 */

#ifndef WEILDESC_REPORT_HPP
#define WEILDESC_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"
#include "certify.hpp"
#include "counter.hpp"

namespace weildesc {

using ordered_json = nlohmann::ordered_json;

enum class RunMode { as_curve, as_hyper, kummer };

inline const char* to_string(RunMode m) {
    switch (m) {
        case RunMode::as_curve: return "as-curve";
        case RunMode::as_hyper: return "as-hyper";
        case RunMode::kummer: return "kummer";
    }
    return "?";
}

struct CountReport {
    RunMode mode = RunMode::as_curve;
    std::string field_spec;  // k
    std::uint64_t q = 0;
    std::uint32_t r = 1;
    int d = 0;
    std::optional<std::uint32_t> e;      // Kummer only
    std::optional<std::uint32_t> nvars;  // hypersurface only
    std::string f_text;
    std::string basis_text;

    BigInt N_direct;    // pair-enumeration oracle
    BigInt N_identity;  // trace / norm identity route
    std::vector<std::pair<std::string, BigInt>> routes;  // every computed route, labeled
    std::uint32_t delta = 0;                             // distinct roots of f in k_r (Kummer)
    std::vector<std::uint64_t> fibers;                   // lambda |-> #W_lambda(k), lambda in index order
    BigInt deviation;                                    // sign convention per mode

    std::vector<Certificate> certificates;
    struct BoundLine {
        BoundSpec spec;
        std::optional<bool> within;  // nullopt: informational value only
    };
    std::vector<BoundLine> bound_lines;
    GenusWeil genus;

    bool exempt = false;       // hypothesis failed or could not be certified
    bool identity_ok = true;   // all computed routes agree
    double ms_direct = 0, ms_identity = 0;

    FieldPtr label_field;  // field of the lambdas (k), for fiber labels
};

inline ordered_json to_json(const Certificate& c) {
    ordered_json j;
    j["check"] = c.check;
    j["verdict"] = to_string(c.verdict);
    if (c.witness) {
        ordered_json w;
        w["kind"] = c.witness->kind;
        if (!c.witness->elements.empty()) w["elements"] = c.witness->elements;
        if (!c.witness->detail.empty()) w["detail"] = c.witness->detail;
        j["witness"] = w;
    }
    j["work_degree"] = c.work_degree;
    if (c.bounded_search) j["bounded_search"] = true;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

inline ordered_json to_json(const BoundSpec& b) {
    ordered_json j;
    j["name"] = b.name;
    ordered_json terms = ordered_json::array();
    for (const auto& t : b.terms) {
        ordered_json tj;
        tj["coeff"] = BoundSpec::rat_str(t.coeff);
        tj["q_half_exp"] = t.half_exp;
        terms.push_back(tj);
    }
    j["terms"] = terms;
    j["exact"] = b.exact_string();
    j["approx"] = fixed6(b.approx());
    return j;
}

inline ordered_json to_json(const CountReport& rep, bool timings = false) {
    ordered_json j;
    j["mode"] = to_string(rep.mode);
    j["field"] = rep.field_spec;
    j["q"] = rep.q;
    j["r"] = rep.r;
    j["d"] = rep.d;
    if (rep.e) j["e"] = *rep.e;
    if (rep.nvars) j["n"] = *rep.nvars;
    j["f"] = rep.f_text;
    j["basis"] = rep.basis_text;
    j["N_direct"] = rep.N_direct.str();
    j["N_identity"] = rep.N_identity.str();
    if (!rep.routes.empty()) {
        ordered_json routes;
        for (const auto& [name, v] : rep.routes) routes[name] = v.str();
        j["routes"] = routes;
    }
    if (rep.mode == RunMode::kummer) {
        j["delta"] = rep.delta;
        ordered_json fj = ordered_json::array();
        for (std::size_t lam = 0; lam < rep.fibers.size(); ++lam) {
            ordered_json one;
            one["lambda"] = rep.label_field ? rep.label_field->element_str(lam) : std::to_string(lam);
            one["count"] = rep.fibers[lam];
            fj.push_back(one);
        }
        j["fibers"] = fj;
    }
    j["deviation"] = rep.deviation.str();
    ordered_json certs = ordered_json::array();
    for (const auto& c : rep.certificates) certs.push_back(to_json(c));
    j["certificates"] = certs;
    ordered_json bounds = ordered_json::array();
    for (const auto& bl : rep.bound_lines) {
        ordered_json b = to_json(bl.spec);
        b["within"] = bl.within ? ordered_json(*bl.within) : ordered_json(nullptr);
        bounds.push_back(b);
    }
    j["bounds"] = bounds;
    if (rep.genus.as_genus) j["genus"] = BoundSpec::rat_str(*rep.genus.as_genus);
    if (rep.genus.kummer_genus)
        j["genus_range"] = {BoundSpec::rat_str(rep.genus.kummer_genus->first),
                            BoundSpec::rat_str(rep.genus.kummer_genus->second)};
    j["exempt"] = rep.exempt;
    j["identity_ok"] = rep.identity_ok;
    if (timings) {
        j["ms_direct"] = fixed6(rep.ms_direct);
        j["ms_identity"] = fixed6(rep.ms_identity);
    }
    return j;
}

// ----- CSV ---------------------------------------------------------------------

inline std::string csv_header() {
    return "q,r,d,e,n,mode,f,basis,N_direct,N_identity,delta,deviation,"
           "bound_two_term,bound_simple,bound_kummer,bound_w_lambda,bound_weil,"
           "verdict_two_term,verdict_simple,verdict_kummer,verdict_w_lambda,"
           "cert_split_form,cert_hypotheses,exempt,identity_ok";
}

namespace detail {

inline std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += "\"";
    return out;
}

inline std::string verdict_cell(const std::optional<bool>& v) {
    if (!v) return "";
    return *v ? "pass" : "fail";
}

}  // namespace detail

inline std::string csv_row(const CountReport& rep) {
    std::string two, simple, kummer, wl, weil;
    std::optional<bool> v_two, v_simple, v_kummer, v_wl;
    for (const auto& bl : rep.bound_lines) {
        const std::string& n = bl.spec.name;
        std::string val = fixed6(bl.spec.approx());
        if (n == "as-two-term" || n == "as-hyper-two-term") {
            two = val;
            v_two = bl.within;
        } else if (n == "as-simple" || n == "as-hyper-simple") {
            simple = val;
            v_simple = bl.within;
        } else if (n == "kummer") {
            kummer = val;
            v_kummer = bl.within;
        } else if (n == "w-lambda") {
            wl = val;
            v_wl = bl.within;
        } else if (n == "weil") {
            weil = val;
        }
    }
    std::string cert_split, cert_hyp;
    for (const auto& c : rep.certificates) {
        if (c.check == "split-form-nonsingular" || c.check == "split-form-nonsingular-multivar")
            cert_split = to_string(c.verdict);
        if (c.check == "kummer-hypotheses" || c.check == "deligne") cert_hyp = to_string(c.verdict);
    }
    std::string row;
    row += std::to_string(rep.q) + "," + std::to_string(rep.r) + "," + std::to_string(rep.d) + ",";
    row += (rep.e ? std::to_string(*rep.e) : "") + ",";
    row += (rep.nvars ? std::to_string(*rep.nvars) : "") + ",";
    row += std::string(to_string(rep.mode)) + ",";
    row += detail::csv_quote(rep.f_text) + "," + detail::csv_quote(rep.basis_text) + ",";
    row += rep.N_direct.str() + "," + rep.N_identity.str() + ",";
    row += (rep.mode == RunMode::kummer ? std::to_string(rep.delta) : "") + ",";
    row += rep.deviation.str() + ",";
    row += two + "," + simple + "," + kummer + "," + wl + "," + weil + ",";
    row += detail::verdict_cell(v_two) + "," + detail::verdict_cell(v_simple) + "," +
           detail::verdict_cell(v_kummer) + "," + detail::verdict_cell(v_wl) + ",";
    row += cert_split + "," + cert_hyp + ",";
    row += std::string(rep.exempt ? "true" : "false") + "," + (rep.identity_ok ? "true" : "false");
    return row;
}

}  // namespace weildesc

#endif  // WEILDESC_REPORT_HPP
