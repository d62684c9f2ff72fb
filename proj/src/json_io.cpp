#include "forge/json_io.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <utility>

#include "forge/errors.hpp"

namespace forge {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* key) {
    if (!j.is_object()) throw JsonError(std::string("expected an object with key '") + key + "'");
    const auto it = j.find(key);
    if (it == j.end()) throw JsonError(std::string("missing key '") + key + "'");
    return *it;
}

void require_keys(const json& j, std::set<std::string> keys, const char* what) {
    if (!j.is_object()) throw JsonError(std::string(what) + ": expected an object");
    for (const auto& [k, v] : j.items()) {
        (void)v;
        if (!keys.erase(k)) throw JsonError(std::string(what) + ": unexpected key '" + k + "'");
    }
    if (!keys.empty())
        throw JsonError(std::string(what) + ": missing key '" + *keys.begin() + "'");
}

long long as_int(const json& j, const char* what) {
    if (!j.is_number_integer()) throw JsonError(std::string(what) + ": expected an integer");
    return j.get<long long>();
}

std::string as_string(const json& j, const char* what) {
    if (!j.is_string()) throw JsonError(std::string(what) + ": expected a string");
    return j.get<std::string>();
}

const json& as_array(const json& j, const char* what) {
    if (!j.is_array()) throw JsonError(std::string(what) + ": expected an array");
    return j;
}

std::string free_letter_name(int i) {
    if (i < 26) return std::string(1, static_cast<char>('a' + i));
    return "g" + std::to_string(i);
}

std::vector<int> int_list(const json& j, const char* what) {
    std::vector<int> out;
    for (const auto& e : as_array(j, what)) out.push_back(static_cast<int>(as_int(e, what)));
    return out;
}

}  // namespace

json rat_to_json(const Rat& r) { return json::array({r.num(), r.den()}); }

Rat rat_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw JsonError("rational: expected [num, den]");
    const long long n = as_int(j[0], "rational numerator");
    const long long d = as_int(j[1], "rational denominator");
    if (d == 0) throw JsonError("rational: zero denominator");
    return Rat(n, d);
}

json metric_to_json(const FinMetric& m) {
    json dist = json::array();
    for (int i = 0; i < m.size(); ++i)
        for (int j = i + 1; j < m.size(); ++j) dist.push_back(rat_to_json(m.at(i, j)));
    return json{{"points", m.points}, {"dist", std::move(dist)}};
}

FinMetric metric_from_json(const json& j) {
    require_keys(j, {"points", "dist"}, "space");
    const json& pts = as_array(field(j, "points"), "space points");
    std::vector<std::string> ids;
    for (const auto& p : pts) ids.push_back(as_string(p, "space point id"));
    std::set<std::string> unique(ids.begin(), ids.end());
    if (unique.size() != ids.size()) throw JsonError("space: duplicate point ids");

    const json& dist = as_array(field(j, "dist"), "space dist");
    const size_t n = ids.size();
    if (dist.size() != n * (n - (n ? 1 : 0)) / 2)
        throw JsonError("space: dist length is not the strict upper triangle");
    FinMetric m(std::move(ids));
    size_t k = 0;
    for (int a = 0; a < m.size(); ++a)
        for (int b = a + 1; b < m.size(); ++b) m.set(a, b, rat_from_json(dist[k++]));
    return m;
}

json dset_to_json(const DistanceSet& d) {
    if (d.bound) return json{{"bound", *d.bound}};
    json vals = json::array();
    for (const Rat& v : d.values) vals.push_back(rat_to_json(v));
    return json{{"values", std::move(vals)}};
}

DistanceSet dset_from_json(const json& j) {
    if (!j.is_object()) throw JsonError("dset: expected an object");
    if (j.contains("bound")) {
        require_keys(j, {"bound"}, "dset");
        return DistanceSet::integer_range(static_cast<int>(as_int(j["bound"], "dset bound")));
    }
    require_keys(j, {"values"}, "dset");
    std::vector<Rat> vals;
    for (const auto& v : as_array(j["values"], "dset values")) vals.push_back(rat_from_json(v));
    return DistanceSet::from_values(std::move(vals));
}

json group_to_json(const GroupSpec& g) {
    switch (g.variant) {
        case GroupSpec::Variant::free_group:
            return json{{"variant", "free"}, {"rank", g.rank}};
        case GroupSpec::Variant::free_abelian:
            return json{{"variant", "free-abelian"}, {"rank", g.rank}};
        case GroupSpec::Variant::finite_table: {
            const int n = g.table.size();
            json rows = json::array();
            for (int i = 0; i < n; ++i) {
                json row = json::array();
                for (int k = 0; k < n; ++k) row.push_back(g.table.mul(i, k));
                rows.push_back(std::move(row));
            }
            return json{{"variant", "finite-table"},
                        {"elements", g.table.elements},
                        {"table", std::move(rows)},
                        {"generators", g.generators}};
        }
    }
    throw JsonError("group: unknown variant");
}

GroupSpec group_from_json(const json& j) {
    const std::string variant = as_string(field(j, "variant"), "group variant");
    if (variant == "free" || variant == "free-abelian") {
        require_keys(j, {"variant", "rank"}, "group");
        const int rank = static_cast<int>(as_int(j["rank"], "group rank"));
        return variant == "free" ? make_free(rank) : make_free_abelian(rank);
    }
    if (variant != "finite-table") throw JsonError("group: unknown variant '" + variant + "'");
    require_keys(j, {"variant", "elements", "table", "generators"}, "group");
    std::vector<std::string> elements;
    for (const auto& e : as_array(j["elements"], "group elements"))
        elements.push_back(as_string(e, "group element name"));
    std::vector<std::vector<int>> rows;
    for (const auto& r : as_array(j["table"], "group table")) {
        std::vector<int> row;
        for (const auto& e : as_array(r, "group table row"))
            row.push_back(static_cast<int>(as_int(e, "group table entry")));
        rows.push_back(std::move(row));
    }
    std::vector<int> gens;
    for (const auto& e : as_array(j["generators"], "group generators"))
        gens.push_back(static_cast<int>(as_int(e, "group generator")));
    return make_finite_table(std::move(elements), std::move(rows), std::move(gens));
}

std::vector<std::string> generator_names(const GroupSpec& g) {
    std::vector<std::string> names;
    if (g.variant == GroupSpec::Variant::finite_table) {
        for (const int i : g.generators)
            names.push_back(g.table.elements[static_cast<size_t>(i)]);
    } else {
        for (int i = 0; i < g.rank; ++i) names.push_back(free_letter_name(i));
    }
    return names;
}

std::string word_to_string(const GroupSpec& g, const Word& w) {
    switch (g.variant) {
        case GroupSpec::Variant::finite_table:
            if (w.kind != Word::Kind::element) throw JsonError("word: expected an element word");
            return g.table.elements[static_cast<size_t>(w.elem)];
        case GroupSpec::Variant::free_abelian: {
            if (w.kind != Word::Kind::exponents) throw JsonError("word: expected an exponent word");
            std::string out;
            for (size_t i = 0; i < w.vec.size(); ++i) {
                if (w.vec[i] == 0) continue;
                if (static_cast<int>(i) >= 26) throw JsonError("word: rank beyond letter names");
                out += static_cast<char>('a' + i);
                if (w.vec[i] != 1) out += "^" + std::to_string(w.vec[i]);
            }
            return out.empty() ? "1" : out;
        }
        case GroupSpec::Variant::free_group: {
            if (w.kind != Word::Kind::letters) throw JsonError("word: expected a letter word");
            for (const int l : w.letters)
                if (std::abs(l) > 26) throw JsonError("word: rank beyond letter names");
            return format_free_word(w);
        }
    }
    throw JsonError("word: unknown group variant");
}

Word word_from_string(const GroupSpec& g, const std::string& s) {
    switch (g.variant) {
        case GroupSpec::Variant::finite_table: {
            for (size_t i = 0; i < g.table.elements.size(); ++i)
                if (g.table.elements[i] == s) return Word::from_elem(static_cast<int>(i));
            throw DomainError("bad-word", "unknown element name", {{"name", s}});
        }
        case GroupSpec::Variant::free_abelian: {
            const Word letters = parse_free_word(s, g.rank);
            std::vector<long long> vec(static_cast<size_t>(g.rank), 0);
            for (const int l : letters.letters)
                vec[static_cast<size_t>(std::abs(l) - 1)] += l > 0 ? 1 : -1;
            return Word::from_vec(std::move(vec));
        }
        case GroupSpec::Variant::free_group:
            return parse_free_word(s, g.rank);
    }
    throw JsonError("word: unknown group variant");
}

json word_to_json(const GroupSpec& g, const Word& w) {
    if (g.variant == GroupSpec::Variant::free_abelian) {
        if (w.kind != Word::Kind::exponents) throw JsonError("word: expected an exponent word");
        return json(w.vec);
    }
    return json(word_to_string(g, w));
}

Word word_from_json(const GroupSpec& g, const json& j) {
    if (g.variant == GroupSpec::Variant::free_abelian) {
        std::vector<long long> vec;
        for (const auto& e : as_array(j, "word")) vec.push_back(as_int(e, "word exponent"));
        if (static_cast<int>(vec.size()) != g.rank)
            throw JsonError("word: exponent vector has the wrong rank");
        return Word::from_vec(std::move(vec));
    }
    return word_from_string(g, as_string(j, "word"));
}

json katetov_to_json(const KatetovFn& r) {
    json values = json::array();
    for (const Rat& v : r.value) values.push_back(rat_to_json(v));
    return json{{"anchor", r.anchor}, {"value", values}};
}

KatetovFn katetov_from_json(const json& j) {
    require_keys(j, {"anchor", "value"}, "katetov function");
    KatetovFn r;
    r.anchor = int_list(j["anchor"], "katetov anchor");
    for (const auto& v : as_array(j["value"], "katetov value")) r.value.push_back(rat_from_json(v));
    if (r.anchor.size() != r.value.size())
        throw JsonError("katetov function: anchor and value lengths differ");
    return r;
}

json iso_to_json(const PartialIsometry& p) { return json{{"dom", p.dom}, {"img", p.img}}; }

PartialIsometry iso_from_json(const json& j) {
    require_keys(j, {"dom", "img"}, "partial isometry");
    PartialIsometry p{int_list(j["dom"], "isometry dom"), int_list(j["img"], "isometry img")};
    if (p.dom.size() != p.img.size())
        throw JsonError("partial isometry: dom and img lengths differ");
    return p;
}

json constraint_to_json(const AgreementConstraint& c) {
    return json{{"anchor_points", c.anchor_points}, {"required_images", c.required_images}};
}

AgreementConstraint constraint_from_json(const json& j) {
    require_keys(j, {"anchor_points", "required_images"}, "constraint");
    AgreementConstraint c;
    c.anchor_points = int_list(j["anchor_points"], "constraint anchors");
    for (const auto& row : as_array(j["required_images"], "constraint images"))
        c.required_images.push_back(int_list(row, "constraint image row"));
    return c;
}

json subgroup_to_json(const SubgroupSpec& s) {
    if (s.z_index > 0) return json{{"z_index", s.z_index}};
    return json{{"elements", s.elements}};
}

SubgroupSpec subgroup_from_json(const json& j) {
    SubgroupSpec s;
    if (j.is_object() && j.contains("z_index")) {
        require_keys(j, {"z_index"}, "subgroup");
        s.z_index = static_cast<int>(as_int(j["z_index"], "subgroup z_index"));
        return s;
    }
    require_keys(j, {"elements"}, "subgroup");
    s.elements = int_list(j["elements"], "subgroup elements");
    return s;
}

json saturation_to_json(const SaturationLevel& s) {
    return json{{"k", s.k}, {"space", metric_to_json(s.space)}, {"dset", dset_to_json(s.dset)}};
}

SaturationLevel saturation_from_json(const json& j) {
    require_keys(j, {"k", "space", "dset"}, "saturation level");
    SaturationLevel s;
    s.k = static_cast<int>(as_int(j["k"], "saturation k"));
    s.space = metric_from_json(j["space"]);
    s.dset = dset_from_json(j["dset"]);
    return s;
}

json action_to_json(const FiniteAction& a) {
    const std::vector<std::string> names = generator_names(a.group);
    if (names.size() != a.gen_maps.size())
        throw JsonError("action: generator map count does not match the group");
    json maps = json::object();
    for (size_t i = 0; i < names.size(); ++i) {
        if (maps.contains(names[i])) throw JsonError("action: duplicate generator name");
        maps[names[i]] = a.gen_maps[i];
    }
    return json{{"group", group_to_json(a.group)},
                {"space", metric_to_json(a.space)},
                {"gen_maps", std::move(maps)}};
}

FiniteAction action_from_json(const json& j) {
    require_keys(j, {"group", "space", "gen_maps"}, "action");
    FiniteAction a;
    a.group = group_from_json(j["group"]);
    a.space = metric_from_json(j["space"]);
    const json& maps = j["gen_maps"];
    if (!maps.is_object()) throw JsonError("action gen_maps: expected an object");
    const std::vector<std::string> names = generator_names(a.group);
    if (maps.size() != names.size())
        throw JsonError("action gen_maps: wrong number of generators");
    for (const std::string& name : names) {
        if (!maps.contains(name))
            throw JsonError("action gen_maps: missing generator '" + name + "'");
        std::vector<int> img;
        for (const auto& e : as_array(maps[name], "action generator map"))
            img.push_back(static_cast<int>(as_int(e, "action image index")));
        a.gen_maps.push_back(std::move(img));
    }
    return a;
}

json lattice_to_json(const Lattice& l) {
    return json{{"rank", l.rank}, {"basis", l.basis}};
}

Lattice lattice_from_json(const json& j) {
    require_keys(j, {"rank", "basis"}, "lattice");
    const int rank = static_cast<int>(as_int(j["rank"], "lattice rank"));
    std::vector<std::vector<long long>> basis;
    for (const auto& r : as_array(j["basis"], "lattice basis")) {
        std::vector<long long> row;
        for (const auto& e : as_array(r, "lattice basis row"))
            row.push_back(as_int(e, "lattice entry"));
        basis.push_back(std::move(row));
    }
    return make_lattice(rank, std::move(basis));
}

json stallings_to_json(const StallingsGraph& g) {
    return json{{"rank", g.rank}, {"base", g.base}, {"out", g.out}};
}

StallingsGraph stallings_from_json(const json& j) {
    require_keys(j, {"rank", "base", "out"}, "stallings graph");
    StallingsGraph g;
    g.rank = static_cast<int>(as_int(j["rank"], "stallings rank"));
    if (g.rank < 1) throw JsonError("stallings graph: rank must be >= 1");
    const json& out = as_array(j["out"], "stallings out");
    const int n = static_cast<int>(out.size());
    if (n < 1) throw JsonError("stallings graph: needs at least the base vertex");
    g.base = static_cast<int>(as_int(j["base"], "stallings base"));
    if (g.base < 0 || g.base >= n) throw JsonError("stallings graph: base out of range");
    g.out.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(g.rank), -1));
    g.in.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(g.rank), -1));
    for (int v = 0; v < n; ++v) {
        const json& row = as_array(out[static_cast<size_t>(v)], "stallings out row");
        if (static_cast<int>(row.size()) != g.rank)
            throw JsonError("stallings graph: out row has the wrong width");
        for (int l = 0; l < g.rank; ++l) {
            const int h = static_cast<int>(as_int(row[static_cast<size_t>(l)], "stallings edge"));
            if (h < -1 || h >= n) throw JsonError("stallings graph: edge target out of range");
            g.out[static_cast<size_t>(v)][static_cast<size_t>(l)] = h;
            if (h == -1) continue;
            int& slot = g.in[static_cast<size_t>(h)][static_cast<size_t>(l)];
            if (slot != -1) throw JsonError("stallings graph: not folded");
            slot = v;
        }
    }
    // Disconnected vertices would silently drop generators; reject them.
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<int> stack{g.base};
    seen[static_cast<size_t>(g.base)] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int l = 0; l < g.rank; ++l) {
            for (const int w : {g.out[static_cast<size_t>(v)][static_cast<size_t>(l)],
                                g.in[static_cast<size_t>(v)][static_cast<size_t>(l)]}) {
                if (w != -1 && !seen[static_cast<size_t>(w)]) {
                    seen[static_cast<size_t>(w)] = 1;
                    stack.push_back(w);
                }
            }
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw JsonError("stallings graph: not connected");
    return g;
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string metric_dot(const FinMetric& m) {
    std::string out = "graph space {\n  node [shape=circle];\n";
    for (int i = 0; i < m.size(); ++i)
        out += "  p" + std::to_string(i) + " [label=\"" +
               dot_escape(m.points[static_cast<size_t>(i)]) + "\"];\n";
    for (int i = 0; i < m.size(); ++i)
        for (int j = i + 1; j < m.size(); ++j)
            out += "  p" + std::to_string(i) + " -- p" + std::to_string(j) + " [label=\"" +
                   m.at(i, j).str() + "\"];\n";
    out += "}\n";
    return out;
}

std::string stallings_dot(const StallingsGraph& g) {
    std::string out = "digraph stallings {\n  rankdir=LR;\n";
    for (size_t v = 0; v < g.out.size(); ++v)
        out += "  v" + std::to_string(v) +
               (static_cast<int>(v) == g.base ? " [shape=doublecircle];\n" : " [shape=circle];\n");
    for (size_t v = 0; v < g.out.size(); ++v)
        for (int l = 0; l < g.rank; ++l) {
            const int h = g.out[v][static_cast<size_t>(l)];
            if (h == -1) continue;
            out += "  v" + std::to_string(v) + " -> v" + std::to_string(h) + " [label=\"" +
                   free_letter_name(l) + "\"];\n";
        }
    out += "}\n";
    return out;
}

}  // namespace forge
