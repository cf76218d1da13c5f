// test_io.cpp — JSON round trips and input errors
#include <doctest.h>

#include "helpers.hpp"
#include "qms/io.hpp"

#include <string>

using namespace qms;
using namespace qms::testing;
namespace io = qms::io;

namespace {
std::string data(const std::string& name) { return std::string(QMS_TEST_DATA) + "/" + name; }
}  // namespace

TEST_CASE("matrices and vectors round-trip") {
    Rng rng(70);
    Matrix m = random_matrix(3, rng);
    CHECK((io::matrix_from_json(io::to_json(m)) - m).norm() == 0.0);
    Vector v = m.col(0);
    CHECK((io::vector_from_json(io::to_json(v)) - v).norm() == 0.0);
    // Plain numbers are accepted as real entries.
    Matrix r = io::matrix_from_json(io::json::parse("[[1, 2], [3, [4, 5]]]"));
    CHECK(r(1, 1) == cd(4.0, 5.0));
    CHECK(r(0, 1) == cd(2.0));
    CHECK_THROWS_AS(io::matrix_from_json(io::json::parse("[[1, 2], [3]]")), io::ParseError);
    CHECK_THROWS_AS(io::matrix_from_json(io::json::parse("[[\"a\"]]")), io::ParseError);
}

TEST_CASE("states, algebras, maps, chains and groups round-trip") {
    Rng rng(71);
    StateData s = random_state(3, rng);
    CHECK((io::state_from_json(io::state_to_json(s)).sigma() - s.sigma()).norm() <= 1e-15);

    MatAlgebra a = block_diagonal_algebra({1, 2});
    MatAlgebra b = io::algebra_from_json(io::algebra_to_json(a));
    CHECK(b.signature() == a.signature());
    CHECK(b.dim() == a.dim());

    SuperOp op(random_matrix(4, rng));
    CHECK((io::superop_from_json(io::superop_to_json(op)).mat() - op.mat()).norm() == 0.0);

    ChainSpec c = chain_example();
    ChainSpec c2 = io::chain_from_json(io::chain_to_json(c));
    CHECK((c2.q - c.q).norm() == 0.0);
    CHECK((c2.m - c.m).norm() == 0.0);

    GroupSpec g = symmetric_group_s3();
    GroupSpec g2 = io::group_from_json(io::group_to_json(g));
    CHECK(g2.cayley == g.cayley);
    CHECK(g2.inv == g.inv);
    CHECK((g2.ell - g.ell).norm() == 0.0);
}

TEST_CASE("results round-trip") {
    ChainSpec c = chain_example();
    QMSGenerator l = make_generator(chain_extension_formula(c), full_algebra(2), c.state());
    AlickiForm f = alicki_decompose(l, c.state());
    AlickiForm f2 = io::alicki_from_json(io::alicki_to_json(f));
    CHECK((alicki_rebuild(f2, 2).mat() - alicki_rebuild(f, 2).mat()).norm() == 0.0);
    CHECK(f2.pairing == f.pairing);

    CEResult ce = ce_pipeline(l, c.state());
    XiVector xi = io::xi_from_json(io::xi_to_json(ce.xi));
    CHECK(xi.stage == ce.xi.stage);
    CHECK((xi.vec - ce.xi.vec).norm() == 0.0);

    BimoduleRep rep = io::bimodule_from_json(io::bimodule_to_json(ce.rep));
    CHECK(rep.dim_h() == ce.rep.dim_h());
    CHECK(rep.implementation_residual(xi.vec, cd(0, 1)) <= 1e-9);
    CHECK(tomita_check(rep, l).max_item() <= 1e-9);
}

TEST_CASE("generator files") {
    io::LoadedGenerator chain = io::generator_from_json(io::read_file(data("chain.json")), std::nullopt);
    CHECK(chain.source_kind == "chain");
    CHECK(chain.chain.has_value());
    CHECK(chain.generator.algebra.dim() == 2);

    io::LoadedGenerator grp = io::generator_from_json(io::read_file(data("z3.json")), std::nullopt);
    CHECK(grp.source_kind == "group");
    CHECK(grp.generator.algebra.dim() == 3);

    io::LoadedGenerator dep = io::generator_from_json(io::read_file(data("depolarizing.json")), std::nullopt);
    CHECK(dep.source_kind == "superop");
    REQUIRE(dep.generator.state.has_value());
    // Pauli Kraus operators scaled by 1/√2: L = 2(I − D) with D the depolarizing map.
    CHECK((dep.generator.op.mat() - (depolarizing(2) * cd(2.0)).mat()).norm() <= 1e-12);

    StateData wrong = diag_state({0.5, 0.5});
    CHECK_THROWS_AS(io::generator_from_json(io::read_file(data("chain.json")), wrong), StateMismatch);
}

TEST_CASE("unreadable input") {
    CHECK_THROWS_AS(io::read_file(data("malformed.json")), io::ParseError);
    CHECK_THROWS_AS(io::read_file(data("does_not_exist.json")), io::ParseError);
    CHECK_THROWS_AS(io::state_from_json(io::json::parse("{}")), io::ParseError);
    CHECK_THROWS_AS(io::superop_from_json(io::json::parse("{\"kind\": \"other\"}")), io::ParseError);
}

TEST_CASE("FNV-1a digest") {
    CHECK(io::fnv1a_hex("") == "cbf29ce484222325");
    CHECK(io::fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(io::fnv1a_hex("foobar") == "85944171f73967e8");
}
