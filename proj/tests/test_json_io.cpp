#include <doctest.h>

#include <string>
#include <vector>

#include "forge/errors.hpp"
#include "forge/json_io.hpp"

using namespace forge;
using nlohmann::json;

namespace {

FinMetric make_int_space(std::vector<std::string> ids, std::vector<int> upper) {
    FinMetric m(std::move(ids));
    size_t k = 0;
    for (int i = 0; i < m.size(); ++i)
        for (int j = i + 1; j < m.size(); ++j) m.set(i, j, Rat(upper[k++]));
    return m;
}

bool same_space(const FinMetric& a, const FinMetric& b) {
    return a.points == b.points && a.dist == b.dist;
}

Word wl(std::vector<int> letters) { return Word::from_letters(std::move(letters)); }

}  // namespace

TEST_CASE("rationals serialize exactly and reject malformed pairs") {
    CHECK(rat_to_json(Rat(3, 2)) == json::array({3, 2}));
    CHECK(rat_to_json(Rat(4)) == json::array({4, 1}));
    CHECK(rat_from_json(json::array({3, 2})) == Rat(3, 2));

    // Loading normalizes: re-emission is canonical regardless of input form.
    CHECK(rat_to_json(rat_from_json(json::array({6, 4}))) == json::array({3, 2}));
    CHECK(rat_to_json(rat_from_json(json::array({1, -2}))) == json::array({-1, 2}));

    CHECK_THROWS_AS(rat_from_json(json::array({1, 0})), JsonError);
    CHECK_THROWS_AS(rat_from_json(json::array({1})), JsonError);
    CHECK_THROWS_AS(rat_from_json(json::array({1, 2, 3})), JsonError);
    CHECK_THROWS_AS(rat_from_json(json("1/2")), JsonError);
    CHECK_THROWS_AS(rat_from_json(json::array({1.5, 2})), JsonError);
}

TEST_CASE("metric json is the canonical strict upper triangle") {
    FinMetric m = make_int_space({"a", "b", "c"}, {1, 2, 1});
    m.set(1, 2, Rat(3, 2));
    const json j = metric_to_json(m);
    CHECK(j == json{{"points", {"a", "b", "c"}},
                    {"dist", {{1, 1}, {2, 1}, {3, 2}}}});

    const FinMetric back = metric_from_json(j);
    CHECK(same_space(m, back));

    // Point order is preserved verbatim, not sorted.
    const FinMetric zx = make_int_space({"z", "x"}, {5});
    CHECK(metric_from_json(metric_to_json(zx)).points == std::vector<std::string>{"z", "x"});

    const FinMetric empty{std::vector<std::string>{}};
    CHECK(same_space(metric_from_json(metric_to_json(empty)), empty));
    CHECK(same_space(metric_from_json(metric_to_json(FinMetric({"p"}))), FinMetric({"p"})));

    CHECK_THROWS_AS(metric_from_json(json{{"points", {"a", "b"}}, {"dist", json::array()}}),
                    JsonError);
    CHECK_THROWS_AS(metric_from_json(json{{"points", {"a", "a"}}, {"dist", {{1, 1}}}}),
                    JsonError);
    CHECK_THROWS_AS(metric_from_json(json{{"points", {"a", "b"}}}), JsonError);
    CHECK_THROWS_AS(
        metric_from_json(json{{"points", {"a", "b"}}, {"dist", {{1, 1}}}, {"extra", 1}}),
        JsonError);
    CHECK_THROWS_AS(metric_from_json(json{{"points", {"a", "b"}}, {"dist", {{1, 0}}}}),
                    JsonError);
}

TEST_CASE("distance sets round-trip through both forms") {
    const DistanceSet range = DistanceSet::integer_range(3);
    CHECK(dset_to_json(range) == json{{"bound", 3}});
    const DistanceSet range_back = dset_from_json(dset_to_json(range));
    CHECK(range_back.values == range.values);
    CHECK(range_back.bound == range.bound);

    const DistanceSet vals = DistanceSet::from_values({Rat(1, 2), Rat(2)});
    CHECK(dset_to_json(vals) == json{{"values", {{1, 2}, {2, 1}}}});
    const DistanceSet vals_back = dset_from_json(dset_to_json(vals));
    CHECK(vals_back.values == vals.values);
    CHECK_FALSE(vals_back.bound.has_value());

    CHECK_THROWS_AS(dset_from_json(json{{"bound", 2}, {"values", json::array()}}), JsonError);
    CHECK_THROWS_AS(dset_from_json(json::object()), JsonError);
    CHECK_THROWS_AS(dset_from_json(json(3)), JsonError);
}

TEST_CASE("groups and words round-trip in all three variants") {
    const GroupSpec f2 = make_free(2);
    CHECK(group_to_json(f2) == json{{"variant", "free"}, {"rank", 2}});
    CHECK(same_group(group_from_json(group_to_json(f2)), f2));

    const GroupSpec z2 = make_free_abelian(2);
    CHECK(group_to_json(z2) == json{{"variant", "free-abelian"}, {"rank", 2}});
    CHECK(same_group(group_from_json(group_to_json(z2)), z2));

    const GroupSpec c3 = make_cyclic(3);
    const json jc3 = group_to_json(c3);
    CHECK(jc3["variant"] == "finite-table");
    CHECK(jc3["elements"] == json({"0", "1", "2"}));
    CHECK(jc3["generators"] == json({1}));
    CHECK(same_group(group_from_json(jc3), c3));

    CHECK(generator_names(f2) == std::vector<std::string>{"a", "b"});
    CHECK(generator_names(c3) == std::vector<std::string>{"1"});

    // Free words: run-length letter syntax, "1" for the identity.
    CHECK(word_to_string(f2, wl({1, 1, -2})) == "a^2b^-1");
    CHECK(word_to_string(f2, wl({})) == "1");
    CHECK(word_from_string(f2, "a^2b^-1") == wl({1, 1, -2}));
    CHECK(word_from_string(f2, "1") == wl({}));
    CHECK(word_from_string(f2, "") == wl({}));
    CHECK(word_from_string(f2, "A") == wl({-1}));
    CHECK(word_from_string(f2, "abA") == wl({1, 2, -1}));
    CHECK(word_to_json(f2, wl({2})) == json("b"));
    CHECK(word_from_json(f2, json("b")) == wl({2}));

    // Abelian words: exponent vectors in JSON, commuting letter syntax.
    const Word vec = Word::from_vec({3, -1});
    CHECK(word_to_json(z2, vec) == json({3, -1}));
    CHECK(word_from_json(z2, json({3, -1})) == vec);
    CHECK(word_to_string(z2, vec) == "a^3b^-1");
    CHECK(word_from_string(z2, "b^-1a^2a") == vec);

    // Table words: the element name.
    CHECK(word_to_json(c3, Word::from_elem(2)) == json("2"));
    CHECK(word_from_json(c3, json("2")) == Word::from_elem(2));

    CHECK_THROWS_AS(word_from_string(c3, "7"), DomainError);
    CHECK_THROWS_AS(word_from_string(f2, "c"), DomainError);
    CHECK_THROWS_AS(word_from_string(f2, "a^"), DomainError);
    CHECK_THROWS_AS(word_from_string(f2, "a^x"), DomainError);
    CHECK_THROWS_AS(word_from_string(f2, "a 2"), DomainError);
    CHECK_THROWS_AS(word_from_json(z2, json({1, 2, 3})), JsonError);
    CHECK_THROWS_AS(group_from_json(json{{"variant", "banach"}}), JsonError);
    CHECK_THROWS_AS(group_from_json(json{{"variant", "free"}}), JsonError);
}

TEST_CASE("saturation levels and actions round-trip") {
    SaturationLevel s;
    s.k = 2;
    s.space = make_int_space({"x", "y"}, {1});
    s.dset = DistanceSet::integer_range(2);
    const SaturationLevel back = saturation_from_json(saturation_to_json(s));
    CHECK(back.k == 2);
    CHECK(same_space(back.space, s.space));
    CHECK(back.dset.values == s.dset.values);
    CHECK(back.dset.bound == s.dset.bound);

    FiniteAction a;
    a.group = make_cyclic(2);
    a.space = make_int_space({"x", "y"}, {1});
    a.gen_maps = {{1, 0}};
    const json ja = action_to_json(a);
    CHECK(ja["gen_maps"] == json{{"1", {1, 0}}});
    const FiniteAction aback = action_from_json(ja);
    CHECK(same_group(aback.group, a.group));
    CHECK(same_space(aback.space, a.space));
    CHECK(aback.gen_maps == a.gen_maps);

    FiniteAction z;
    z.group = make_free_abelian(2);
    z.space = make_int_space({"p", "q"}, {2});
    z.gen_maps = {{1, 0}, {0, 1}};
    const json jz = action_to_json(z);
    CHECK(jz["gen_maps"] == json{{"a", {1, 0}}, {"b", {0, 1}}});
    CHECK(action_from_json(jz).gen_maps == z.gen_maps);

    json missing = jz;
    missing["gen_maps"].erase("b");
    CHECK_THROWS_AS(action_from_json(missing), JsonError);
    json renamed = jz;
    renamed["gen_maps"]["c"] = renamed["gen_maps"]["b"];
    renamed["gen_maps"].erase("b");
    CHECK_THROWS_AS(action_from_json(renamed), JsonError);
}

TEST_CASE("katetov, isometry, constraint, and subgroup shapes round-trip") {
    const KatetovFn r{{0, 2}, {Rat(1), Rat(3, 2)}};
    const json jr = katetov_to_json(r);
    CHECK(jr == json{{"anchor", {0, 2}}, {"value", {{1, 1}, {3, 2}}}});
    const KatetovFn rback = katetov_from_json(jr);
    CHECK(rback.anchor == r.anchor);
    CHECK(rback.value == r.value);
    CHECK_THROWS_AS(katetov_from_json(json{{"anchor", {0}}, {"value", json::array()}}),
                    JsonError);

    const PartialIsometry p{{0, 1}, {2, 3}};
    const json jp = iso_to_json(p);
    CHECK(jp == json{{"dom", {0, 1}}, {"img", {2, 3}}});
    const PartialIsometry pback = iso_from_json(jp);
    CHECK(pback.dom == p.dom);
    CHECK(pback.img == p.img);
    CHECK_THROWS_AS(iso_from_json(json{{"dom", {0}}, {"img", json::array()}}), JsonError);

    const AgreementConstraint c{{1, 2}, {{0, -1}}};
    const AgreementConstraint cback = constraint_from_json(constraint_to_json(c));
    CHECK(cback.anchor_points == c.anchor_points);
    CHECK(cback.required_images == c.required_images);

    SubgroupSpec table_sub;
    table_sub.elements = {0, 2};
    CHECK(subgroup_to_json(table_sub) == json{{"elements", {0, 2}}});
    CHECK(subgroup_from_json(subgroup_to_json(table_sub)).elements == table_sub.elements);
    SubgroupSpec z_sub;
    z_sub.z_index = 3;
    CHECK(subgroup_to_json(z_sub) == json{{"z_index", 3}});
    CHECK(subgroup_from_json(subgroup_to_json(z_sub)).z_index == 3);
    CHECK_THROWS_AS(subgroup_from_json(json{{"z_index", 3}, {"elements", {0}}}), JsonError);
}

TEST_CASE("lattices and stallings graphs round-trip") {
    const Lattice l = make_lattice(2, {{2, 0}, {0, 2}});
    const json jl = lattice_to_json(l);
    CHECK(jl == json{{"rank", 2}, {"basis", {{2, 0}, {0, 2}}}});
    const Lattice lback = lattice_from_json(jl);
    CHECK(lback.rank == l.rank);
    CHECK(lback.basis == l.basis);
    CHECK(lback.hnf == l.hnf);

    const StallingsGraph g = stallings_graph(2, {wl({1, 1}), wl({2})});
    const json jg = stallings_to_json(g);
    CHECK(jg == json{{"rank", 2}, {"base", 0}, {"out", {{1, 0}, {0, -1}}}});
    const StallingsGraph gback = stallings_from_json(jg);
    CHECK(gback.rank == g.rank);
    CHECK(gback.base == g.base);
    CHECK(gback.out == g.out);
    CHECK(gback.in == g.in);

    // Two a-edges into vertex 0: not folded.
    CHECK_THROWS_AS(
        stallings_from_json(json{{"rank", 2}, {"base", 0}, {"out", {{0, -1}, {0, -1}}}}),
        JsonError);
    // Vertex 1 unreachable from the base.
    CHECK_THROWS_AS(
        stallings_from_json(json{{"rank", 2}, {"base", 0}, {"out", {{0, -1}, {-1, -1}}}}),
        JsonError);
    CHECK_THROWS_AS(
        stallings_from_json(json{{"rank", 2}, {"base", 5}, {"out", {{0, -1}}}}),
        JsonError);
    CHECK_THROWS_AS(stallings_from_json(json{{"rank", 2}, {"base", 0}, {"out", {{0}}}}),
                    JsonError);
    CHECK_THROWS_AS(lattice_from_json(json{{"rank", 2}, {"basis", {{1, 2, 3}}}}), DomainError);
}

TEST_CASE("canonical dump is byte-stable") {
    const FinMetric p = FinMetric({"x"});
    CHECK(canonical_dump(metric_to_json(p)) == "{\n  \"dist\": [],\n  \"points\": [\n    \"x\"\n  ]\n}\n");

    // Idempotent through a parse cycle and identical for equal values.
    const FinMetric m = make_int_space({"a", "b", "c"}, {1, 2, 2});
    const std::string once = canonical_dump(metric_to_json(m));
    CHECK(canonical_dump(json::parse(once)) == once);
    const FinMetric m2 = make_int_space({"a", "b", "c"}, {1, 2, 2});
    CHECK(canonical_dump(metric_to_json(m2)) == once);

    const json composite{{"group", group_to_json(make_free(2))},
                         {"lattice", lattice_to_json(make_lattice(1, {{3}}))}};
    CHECK(canonical_dump(json::parse(canonical_dump(composite))) == canonical_dump(composite));
}

TEST_CASE("dot exports render spaces and stallings graphs") {
    const FinMetric m = make_int_space({"x", "y"}, {2});
    CHECK(metric_dot(m) ==
          "graph space {\n"
          "  node [shape=circle];\n"
          "  p0 [label=\"x\"];\n"
          "  p1 [label=\"y\"];\n"
          "  p0 -- p1 [label=\"2\"];\n"
          "}\n");

    FinMetric half = make_int_space({"a\"q", "b"}, {1});
    half.set(0, 1, Rat(1, 2));
    const std::string dot = metric_dot(half);
    CHECK(dot.find("label=\"a\\\"q\"") != std::string::npos);
    CHECK(dot.find("label=\"1/2\"") != std::string::npos);

    const StallingsGraph g = stallings_graph(2, {wl({1, 1}), wl({2})});
    CHECK(stallings_dot(g) ==
          "digraph stallings {\n"
          "  rankdir=LR;\n"
          "  v0 [shape=doublecircle];\n"
          "  v1 [shape=circle];\n"
          "  v0 -> v1 [label=\"a\"];\n"
          "  v0 -> v0 [label=\"b\"];\n"
          "  v1 -> v0 [label=\"a\"];\n"
          "}\n");
}
