#include "forge/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <variant>

#include <CLI11.hpp>

#include "forge/action.hpp"
#include "forge/errors.hpp"
#include "forge/extension_search.hpp"
#include "forge/group.hpp"
#include "forge/json_io.hpp"
#include "forge/metric.hpp"
#include "forge/separability.hpp"
#include "forge/suites.hpp"
#include "forge/urysohn.hpp"

namespace forge {

namespace {

using nlohmann::json;

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw JsonError("cannot read '" + path + "'");
    json j;
    in >> j;
    return j;
}

void emit(std::ostream& os, const std::string& out, const std::string& text) {
    if (out.empty()) {
        os << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw DomainError("bad-flag", "cannot write output file", {{"path", out}});
    f << text;
}

void emit_json(std::ostream& os, const std::string& out, const json& j) {
    emit(os, out, canonical_dump(j));
}

std::string strip_ws(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](unsigned char c) { return std::isspace(c) != 0; }),
            s.end());
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts{""};
    for (const char c : s) {
        if (c == sep)
            parts.emplace_back();
        else
            parts.back() += c;
    }
    return parts;
}

long long parse_ll(const std::string& t, const char* flag) {
    size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != t.size() || t.empty())
        throw DomainError("bad-flag", "expected an integer", {{"flag", flag}, {"value", t}});
    return v;
}

// "0,1,2"; the empty string is the empty list.
std::vector<int> parse_int_list(const std::string& s, const char* flag) {
    std::vector<int> out;
    const std::string clean = strip_ws(s);
    if (clean.empty()) return out;
    for (const std::string& t : split(clean, ','))
        out.push_back(static_cast<int>(parse_ll(t, flag)));
    return out;
}

std::vector<long long> parse_ll_list(const std::string& s, const char* flag) {
    std::vector<long long> out;
    for (const std::string& t : split(strip_ws(s), ',')) out.push_back(parse_ll(t, flag));
    return out;
}

// "5" or "5/2".
Rat parse_rat(const std::string& s, const char* flag) {
    const std::string clean = strip_ws(s);
    const std::vector<std::string> parts = split(clean, '/');
    if (parts.size() == 1) return Rat(parse_ll(parts[0], flag));
    if (parts.size() == 2) {
        const long long den = parse_ll(parts[1], flag);
        if (den == 0)
            throw DomainError("bad-flag", "zero denominator", {{"flag", flag}, {"value", s}});
        return Rat(parse_ll(parts[0], flag), den);
    }
    throw DomainError("bad-flag", "expected n or n/d", {{"flag", flag}, {"value", s}});
}

// "1..n" or "n" for the integer range {1, ..., n}; otherwise a
// comma-separated value list like "1,3/2,2".
DistanceSet parse_dset(const std::string& s) {
    const std::string clean = strip_ws(s);
    const size_t dots = clean.find("..");
    if (dots != std::string::npos) {
        if (clean.substr(0, dots) != "1")
            throw DomainError("bad-flag", "integer ranges start at 1",
                              {{"flag", "--dset"}, {"value", s}});
        return DistanceSet::integer_range(
            static_cast<int>(parse_ll(clean.substr(dots + 2), "--dset")));
    }
    if (clean.find(',') == std::string::npos && clean.find('/') == std::string::npos)
        return DistanceSet::integer_range(static_cast<int>(parse_ll(clean, "--dset")));
    std::vector<Rat> vals;
    for (const std::string& t : split(clean, ',')) vals.push_back(parse_rat(t, "--dset"));
    return DistanceSet::from_values(std::move(vals));
}

// Smallest free rank covering every letter mentioned in the raw strings.
int infer_rank(const std::vector<std::string>& raw, int flag_rank) {
    if (flag_rank > 0) return flag_rank;
    int rank = 1;
    for (const std::string& s : raw)
        for (const char c : s) {
            if (c >= 'a' && c <= 'z') rank = std::max(rank, c - 'a' + 1);
            if (c >= 'A' && c <= 'Z') rank = std::max(rank, c - 'A' + 1);
        }
    return rank;
}

std::vector<Word> parse_words(const std::string& s, int rank) {
    std::vector<Word> out;
    for (const std::string& t : split(strip_ws(s), ','))
        out.push_back(parse_free_word(t, rank));
    return out;
}

const char* metric_kind_name(MetricViolation::Kind k) {
    switch (k) {
        case MetricViolation::Kind::shape: return "shape";
        case MetricViolation::Kind::diagonal: return "diagonal";
        case MetricViolation::Kind::symmetry: return "symmetry";
        case MetricViolation::Kind::positivity: return "positivity";
        case MetricViolation::Kind::triangle: return "triangle";
    }
    return "unknown";
}

const char* action_kind_name(ActionViolation::Kind k) {
    switch (k) {
        case ActionViolation::Kind::shape: return "shape";
        case ActionViolation::Kind::bijection: return "bijection";
        case ActionViolation::Kind::isometry: return "isometry";
        case ActionViolation::Kind::relations: return "relations";
        case ActionViolation::Kind::commutation: return "commutation";
    }
    return "unknown";
}

json glue_to_json(const GlueResult& g) {
    return json{{"space", metric_to_json(g.space)},
                {"x_image", g.x_image},
                {"y_image", g.y_image}};
}

json rats_to_json(const std::vector<Rat>& vals) {
    json out = json::array();
    for (const Rat& v : vals) out.push_back(rat_to_json(v));
    return out;
}

json exhausted_to_json(const Exhausted& e) {
    return json{{"exhausted",
                 {{"max_points", e.max_points},
                  {"nodes_explored", e.nodes_explored},
                  {"node_budget_hit", e.node_budget_hit}}}};
}

// Collected flag values; each verb binds the subset it uses.
struct Options {
    std::string space, action, sat, fn, graph, iso, ext, new_points, x, y;
    std::string sigma, tau, pi, subgroup, group, constraint, partial, lattice;
    std::string subset, targets, vec, dset, gens, factors, word, member, name, cap_rat, out;
    int k = 0;
    int cap = 2000;
    int degree_cap = 5;
    int m = 0;
    int rank = 0;
    int max_points = 12;
    long long max_nodes = 10'000'000;
    std::uint64_t seed = 0;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& os) {
    CLI::App app{"exact finite constructions: rational metric spaces, isometric group actions,\n"
                 "and separability certificates",
                 "forge"};
    app.require_subcommand(0, 1);
    Options o;
    std::map<std::string, std::function<int()>> handlers;

    const auto add = [&](const char* name, const char* desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--out", o.out, "write the result to this file instead of stdout");
        return sub;
    };

    // ---- metric-core ----
    {
        CLI::App* sub = add("validate", "check the metric axioms of a space, or an action's invariants");
        sub->add_option("--space", o.space, "space JSON file");
        sub->add_option("--action", o.action, "action JSON file");
        handlers["validate"] = [&]() {
            if (o.space.empty() == o.action.empty())
                throw DomainError("bad-flag", "pass exactly one of --space / --action", {});
            json out;
            if (!o.space.empty()) {
                const auto v = validate_metric(metric_from_json(load_file(o.space)));
                out["ok"] = !v;
                if (v)
                    out["violation"] = json{{"kind", metric_kind_name(v->kind)},
                                            {"message", v->message},
                                            {"witness", v->witness}};
            } else {
                const auto v = validate_action(action_from_json(load_file(o.action)));
                out["ok"] = !v;
                if (v)
                    out["violation"] = json{{"kind", action_kind_name(v->kind)},
                                            {"message", v->message},
                                            {"witness", v->witness}};
            }
            emit_json(os, o.out, out);
            return 0;
        };
    }
    {
        CLI::App* sub = add("katetov", "check that a function extends a space by one point");
        sub->add_option("--space", o.space)->required();
        sub->add_option("--fn", o.fn, "katetov function JSON file")->required();
        handlers["katetov"] = [&]() {
            const FinMetric m = metric_from_json(load_file(o.space));
            const KatetovFn r = katetov_from_json(load_file(o.fn));
            emit_json(os, o.out, json{{"ok", katetov_check(m, r)}});
            return 0;
        };
    }
    {
        CLI::App* sub = add("exvalues", "list the expanded distance values of a subset");
        sub->add_option("--space", o.space)->required();
        sub->add_option("--subset", o.subset, "comma-separated point indices; default all");
        handlers["exvalues"] = [&]() {
            const FinMetric m = metric_from_json(load_file(o.space));
            std::vector<int> sub_idx = parse_int_list(o.subset, "--subset");
            if (o.subset.empty())
                for (int i = 0; i < m.size(); ++i) sub_idx.push_back(i);
            emit_json(os, o.out, json{{"values", rats_to_json(expanded_value_set(m, sub_idx))}});
            return 0;
        };
    }
    {
        CLI::App* sub = add("truncate", "rescale distances through a subset's expanded values");
        sub->add_option("--space", o.space)->required();
        sub->add_option("--subset", o.subset)->required();
        handlers["truncate"] = [&]() {
            const FinMetric m = metric_from_json(load_file(o.space));
            emit_json(os, o.out,
                      metric_to_json(truncate_metric(m, parse_int_list(o.subset, "--subset"))));
            return 0;
        };
    }
    {
        CLI::App* sub = add("amalgam", "free amalgam of two spaces over their shared point ids");
        sub->add_option("--x", o.x)->required();
        sub->add_option("--y", o.y)->required();
        handlers["amalgam"] = [&]() {
            const GlueResult g = free_amalgam_shared(metric_from_json(load_file(o.x)),
                                                     metric_from_json(load_file(o.y)));
            emit_json(os, o.out, glue_to_json(g));
            return 0;
        };
    }
    {
        CLI::App* sub = add("sum", "disjoint sum of two spaces at a constant gap");
        sub->add_option("--x", o.x)->required();
        sub->add_option("--y", o.y)->required();
        handlers["sum"] = [&]() {
            const GlueResult g = disjoint_sum(metric_from_json(load_file(o.x)),
                                              metric_from_json(load_file(o.y)));
            emit_json(os, o.out, glue_to_json(g));
            return 0;
        };
    }

    // ---- urysohn ----
    {
        CLI::App* sub = add("saturate", "build the k-saturated space over a distance set");
        sub->add_option("--dset", o.dset, "1..n or a comma-separated value list")->required();
        sub->add_option("--k", o.k, "saturation level")->required();
        sub->add_option("--cap", o.cap, "point budget");
        handlers["saturate"] = [&]() {
            emit_json(os, o.out, saturation_to_json(saturate(parse_dset(o.dset), o.k, o.cap)));
            return 0;
        };
    }
    {
        CLI::App* sub = add("check-sat", "verify a saturation certificate");
        sub->add_option("--sat", o.sat, "saturation JSON file")->required();
        handlers["check-sat"] = [&]() {
            const SaturationLevel s = saturation_from_json(load_file(o.sat));
            const std::vector<KatetovFn> missing = check_saturation(s.space, s.dset, s.k);
            json out{{"ok", missing.empty()}};
            out["missing"] = json::array();
            for (const KatetovFn& r : missing) out["missing"].push_back(katetov_to_json(r));
            emit_json(os, o.out, out);
            return 0;
        };
    }
    {
        CLI::App* sub = add("extend-iso", "walk a partial isometry over new target points");
        sub->add_option("--sat", o.sat)->required();
        sub->add_option("--iso", o.iso, "partial isometry JSON file")->required();
        sub->add_option("--targets", o.targets, "comma-separated point indices")->required();
        handlers["extend-iso"] = [&]() {
            const SaturationLevel s = saturation_from_json(load_file(o.sat));
            const PartialIsometry p = iso_from_json(load_file(o.iso));
            emit_json(os, o.out,
                      iso_to_json(extend_partial_isometry(
                          s, p, parse_int_list(o.targets, "--targets"))));
            return 0;
        };
    }

    // ---- action-ops ----
    {
        CLI::App* sub = add("uspenskii", "absorb a one-point extension into an invariant superspace");
        sub->add_option("--action", o.action)->required();
        sub->add_option("--ext", o.ext, "one-point extension metric JSON file")->required();
        handlers["uspenskii"] = [&]() {
            const FiniteAction act = action_from_json(load_file(o.action));
            emit_json(os, o.out,
                      action_to_json(uspenskii_extend(act, metric_from_json(load_file(o.ext)))));
            return 0;
        };
    }
    {
        CLI::App* sub = add("closure", "iterate one-point absorptions over a list of extensions");
        sub->add_option("--action", o.action)->required();
        sub->add_option("--new-points", o.new_points, "JSON array of katetov functions")->required();
        handlers["closure"] = [&]() {
            const FiniteAction act = action_from_json(load_file(o.action));
            std::vector<KatetovFn> pts;
            const json arr = load_file(o.new_points);
            if (!arr.is_array()) throw JsonError("new points: expected an array");
            for (const auto& e : arr) pts.push_back(katetov_from_json(e));
            emit_json(os, o.out, action_to_json(invariant_closure(act, pts)));
            return 0;
        };
    }
    {
        CLI::App* sub = add("action-sum", "block action on the disjoint sum of two spaces");
        sub->add_option("--x", o.x, "action JSON file")->required();
        sub->add_option("--y", o.y, "action JSON file")->required();
        handlers["action-sum"] = [&]() {
            emit_json(os, o.out,
                      action_to_json(action_sum(action_from_json(load_file(o.x)),
                                                action_from_json(load_file(o.y)))));
            return 0;
        };
    }
    {
        CLI::App* sub = add("amalgamate", "glue two actions over a shared invariant part");
        sub->add_option("--sigma", o.sigma, "base action JSON file")->required();
        sub->add_option("--tau", o.tau)->required();
        sub->add_option("--pi", o.pi)->required();
        handlers["amalgamate"] = [&]() {
            const ActionGlueResult g =
                amalgamate_over_invariant(action_from_json(load_file(o.sigma)),
                                          action_from_json(load_file(o.tau)),
                                          action_from_json(load_file(o.pi)));
            emit_json(os, o.out,
                      json{{"action", action_to_json(g.action)},
                           {"x_image", g.x_image},
                           {"y_image", g.y_image}});
            return 0;
        };
    }
    {
        CLI::App* sub = add("globalize", "extend a whole-group action through a subgroup action");
        sub->add_option("--pi", o.pi, "whole-group action JSON file")->required();
        sub->add_option("--sigma", o.sigma, "subgroup action JSON file")->required();
        sub->add_option("--subgroup", o.subgroup, "subgroup JSON file")->required();
        sub->add_option("--cap", o.cap_rat, "fallback distance, n or n/d")->required();
        handlers["globalize"] = [&]() {
            const GlobalizeResult g = globalize_subgroup_action(
                action_from_json(load_file(o.pi)), action_from_json(load_file(o.sigma)),
                subgroup_from_json(load_file(o.subgroup)), parse_rat(o.cap_rat, "--cap"));
            emit_json(os, o.out,
                      json{{"action", action_to_json(g.action)},
                           {"y_image", g.y_image},
                           {"window", g.window}});
            return 0;
        };
    }
    {
        CLI::App* sub = add("root", "stack m shifted copies so the shift is an m-th root");
        sub->add_option("--action", o.action, "Z-action JSON file")->required();
        sub->add_option("--m", o.m, "root degree")->required();
        sub->add_option("--dset", o.dset, "bound for the cross-level constant")->required();
        handlers["root"] = [&]() {
            const DistanceSet d = parse_dset(o.dset);
            if (!d.bound)
                throw DomainError("bad-flag", "root needs an integer range bound",
                                  {{"flag", "--dset"}, {"value", o.dset}});
            const RootResult r =
                nth_root_extension(action_from_json(load_file(o.action)), o.m, *d.bound);
            emit_json(os, o.out,
                      json{{"space", metric_to_json(r.space)},
                           {"shift", r.shift},
                           {"b_image", r.b_image}});
            return 0;
        };
    }
    {
        CLI::App* sub = add("conjugate", "search for an equivariant isometry between two actions");
        sub->add_option("--x", o.x, "action JSON file")->required();
        sub->add_option("--y", o.y, "action JSON file")->required();
        handlers["conjugate"] = [&]() {
            const auto found = conjugacy_search(action_from_json(load_file(o.x)),
                                                action_from_json(load_file(o.y)));
            json out{{"found", found.has_value()}};
            if (found) out["map"] = *found;
            emit_json(os, o.out, out);
            return 0;
        };
    }

    // ---- extension-search ----
    {
        CLI::App* sub = add("solecki", "search for a superspace extending partial isometries");
        sub->add_option("--space", o.space)->required();
        sub->add_option("--partial", o.partial, "partial isometry JSON file (object or array)")
            ->required();
        sub->add_option("--max-points", o.max_points);
        sub->add_option("--max-nodes", o.max_nodes);
        sub->add_option("--dset", o.dset, "candidate distances; default derived from the space");
        handlers["solecki"] = [&]() {
            const FinMetric a = metric_from_json(load_file(o.space));
            std::vector<PartialIsometry> partials;
            const json pj = load_file(o.partial);
            if (pj.is_array())
                for (const auto& e : pj) partials.push_back(iso_from_json(e));
            else
                partials.push_back(iso_from_json(pj));
            SearchBudget budget{o.max_points, {}, o.max_nodes};
            if (!o.dset.empty()) budget.candidate_distances = parse_dset(o.dset).values;
            const SoleckiResult res = solecki_extend(a, partials, budget);
            if (const auto* ex = std::get_if<Exhausted>(&res)) {
                emit_json(os, o.out, exhausted_to_json(*ex));
                return 3;
            }
            const auto& wit = std::get<SoleckiWitness>(res);
            emit_json(os, o.out,
                      json{{"space", metric_to_json(wit.space)}, {"fulls", wit.fulls}});
            return 0;
        };
    }
    {
        CLI::App* sub = add("approx-action", "search for an action with pinned generator images");
        sub->add_option("--group", o.group, "free abelian group JSON file")->required();
        sub->add_option("--space", o.space)->required();
        sub->add_option("--constraint", o.constraint, "constraint JSON file")->required();
        sub->add_option("--max-points", o.max_points);
        sub->add_option("--max-nodes", o.max_nodes);
        sub->add_option("--dset", o.dset, "candidate distances; default derived from the space");
        handlers["approx-action"] = [&]() {
            SearchBudget budget{o.max_points, {}, o.max_nodes};
            if (!o.dset.empty()) budget.candidate_distances = parse_dset(o.dset).values;
            const ApproxResult res = approximate_action(
                group_from_json(load_file(o.group)), metric_from_json(load_file(o.space)),
                constraint_from_json(load_file(o.constraint)), budget);
            if (const auto* ex = std::get_if<Exhausted>(&res)) {
                emit_json(os, o.out, exhausted_to_json(*ex));
                return 3;
            }
            emit_json(os, o.out, action_to_json(std::get<FiniteAction>(res)));
            return 0;
        };
    }

    // ---- separability ----
    {
        CLI::App* sub = add("hnf", "Hermite normal form of a lattice basis");
        sub->add_option("--lattice", o.lattice, "lattice JSON file")->required();
        handlers["hnf"] = [&]() {
            const Lattice l = lattice_from_json(load_file(o.lattice));
            emit_json(os, o.out, json{{"rank", l.rank}, {"hnf", lattice_hnf(l)}});
            return 0;
        };
    }
    {
        CLI::App* sub = add("lattice-member", "test a vector against a lattice");
        sub->add_option("--lattice", o.lattice)->required();
        sub->add_option("--vec", o.vec, "comma-separated integers")->required();
        handlers["lattice-member"] = [&]() {
            const Lattice l = lattice_from_json(load_file(o.lattice));
            emit_json(os, o.out,
                      json{{"member", lattice_member(l, parse_ll_list(o.vec, "--vec"))}});
            return 0;
        };
    }
    {
        CLI::App* sub = add("separate-lattice", "smallest modulus separating a vector from a lattice");
        sub->add_option("--lattice", o.lattice)->required();
        sub->add_option("--vec", o.vec)->required();
        handlers["separate-lattice"] = [&]() {
            const Lattice l = lattice_from_json(load_file(o.lattice));
            emit_json(
                os, o.out,
                json{{"modulus", lattice_separating_quotient(l, parse_ll_list(o.vec, "--vec"))}});
            return 0;
        };
    }
    {
        CLI::App* sub = add("stallings", "fold a subgroup graph; optionally test a word");
        sub->add_option("--gens", o.gens, "comma-separated words like a^2,b")->required();
        sub->add_option("--rank", o.rank, "ambient free rank; default inferred from the words");
        sub->add_option("--member", o.member, "word to test against the subgroup");
        handlers["stallings"] = [&]() {
            const int rank = infer_rank({o.gens, o.member}, o.rank);
            const StallingsGraph g = stallings_graph(rank, parse_words(o.gens, rank));
            if (o.member.empty()) {
                emit_json(os, o.out, stallings_to_json(g));
                return 0;
            }
            const Word w = parse_free_word(strip_ws(o.member), rank);
            emit_json(os, o.out, json{{"member", subgroup_member(g, w)}});
            return 0;
        };
    }
    {
        CLI::App* sub = add("product-member", "test a word against a product of subgroups");
        sub->add_option("--factors", o.factors, "semicolon-separated generator lists")->required();
        sub->add_option("--word", o.word)->required();
        sub->add_option("--rank", o.rank);
        handlers["product-member"] = [&]() {
            const int rank = infer_rank({o.factors, o.word}, o.rank);
            std::vector<StallingsGraph> factors;
            for (const std::string& f : split(strip_ws(o.factors), ';'))
                factors.push_back(stallings_graph(rank, parse_words(f, rank)));
            const Word w = parse_free_word(strip_ws(o.word), rank);
            emit_json(os, o.out, json{{"member", benois_product_member(factors, w)}});
            return 0;
        };
    }
    {
        CLI::App* sub = add("separate", "search for a finite quotient separating a word");
        sub->add_option("--factors", o.factors, "semicolon-separated generator lists")->required();
        sub->add_option("--word", o.word)->required();
        sub->add_option("--rank", o.rank);
        sub->add_option("--cap", o.degree_cap, "largest symmetric degree to try");
        handlers["separate"] = [&]() {
            const int rank = infer_rank({o.factors, o.word}, o.rank);
            std::vector<StallingsGraph> factors;
            for (const std::string& f : split(strip_ws(o.factors), ';'))
                factors.push_back(stallings_graph(rank, parse_words(f, rank)));
            const Word w = parse_free_word(strip_ws(o.word), rank);
            const SeparationResult res = free_separating_quotient(factors, w, o.degree_cap);
            if (const auto* ex = std::get_if<SeparationExhausted>(&res)) {
                emit_json(os, o.out,
                          json{{"exhausted",
                                {{"max_degree", ex->max_degree},
                                 {"tuples_tried", ex->tuples_tried}}}});
                return 3;
            }
            const auto& q = std::get<FiniteQuotient>(res);
            emit_json(os, o.out,
                      json{{"quotient",
                            {{"degree", q.degree}, {"gen_images", q.gen_images}}}});
            return 0;
        };
    }

    // ---- suites and export ----
    {
        CLI::App* sub = add("suite", "run a module's property suite");
        sub->add_option("--name", o.name, "one of the suite names")->required();
        sub->add_option("--seed", o.seed);
        handlers["suite"] = [&]() {
            std::ostringstream text;
            const bool ok = run_suite(o.name, text, o.seed);
            emit(os, o.out, text.str());
            return ok ? 0 : 1;
        };
    }
    {
        CLI::App* sub = add("export-dot", "render a space or a subgroup graph as DOT");
        sub->add_option("--space", o.space);
        sub->add_option("--graph", o.graph, "stallings graph JSON file");
        handlers["export-dot"] = [&]() {
            if (o.space.empty() == o.graph.empty())
                throw DomainError("bad-flag", "pass exactly one of --space / --graph", {});
            if (!o.space.empty())
                emit(os, o.out, metric_dot(metric_from_json(load_file(o.space))));
            else
                emit(os, o.out, stallings_dot(stallings_from_json(load_file(o.graph))));
            return 0;
        };
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        // Help requests exit 0 through CLI11; everything else is usage.
        const int code = app.exit(e, os, os);
        return code == 0 ? 0 : 64;
    }
    const std::vector<CLI::App*> parsed = app.get_subcommands();
    if (parsed.empty()) {
        os << app.help();
        return 64;
    }

    // Failure objects always go to the stream, never into --out.
    try {
        return handlers.at(parsed.front()->get_name())();
    } catch (const JsonError& e) {
        os << canonical_dump(json{{"error", {{"kind", "malformed-json"}, {"message", e.what()}}}});
        return 65;
    } catch (const nlohmann::json::parse_error& e) {
        os << canonical_dump(json{{"error", {{"kind", "malformed-json"}, {"message", e.what()}}}});
        return 65;
    } catch (const BudgetExhausted& e) {
        os << canonical_dump(json{{"exhausted", e.report()}, {"message", e.what()}});
        return 3;
    } catch (const DomainError& e) {
        os << canonical_dump(json{
            {"error", {{"kind", e.kind()}, {"message", e.what()}, {"detail", e.detail()}}}});
        return 2;
    }
}

}  // namespace forge
