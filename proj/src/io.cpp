// io.cpp — JSON readers and writers
#include "qms/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace qms::io {

namespace {

const json& need(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

cd entry(const json& e) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) return {e[0].get<double>(), e[1].get<double>()};
    throw ParseError("complex entries must be numbers or [re, im] pairs");
}

json entry_json(cd z) { return json::array({z.real(), z.imag()}); }

std::vector<Matrix> matrices(const json& j) {
    if (!j.is_array()) throw ParseError("expected an array of matrices");
    std::vector<Matrix> out;
    for (const auto& m : j) out.push_back(matrix_from_json(m));
    return out;
}

json matrices_json(const std::vector<Matrix>& ms) {
    json a = json::array();
    for (const auto& m : ms) a.push_back(to_json(m));
    return a;
}

}  // namespace

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_file(const std::string& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << h;
    return ss.str();
}

json to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(entry_json(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("matrix must be an array of rows");
    const Eigen::Index r = static_cast<Eigen::Index>(j.size());
    if (r == 0) return Matrix(0, 0);
    if (!j[0].is_array()) throw ParseError("matrix rows must be arrays");
    const Eigen::Index c = static_cast<Eigen::Index>(j[0].size());
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        const json& row = j[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) throw ParseError("ragged matrix rows");
        for (Eigen::Index k = 0; k < c; ++k) m(i, k) = entry(row[static_cast<size_t>(k)]);
    }
    return m;
}

json to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(entry_json(v(i)));
    return a;
}

Vector vector_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("vector must be an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = entry(j[i]);
    return v;
}

json to_json(const RVector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

RVector rvector_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("expected an array of numbers");
    RVector v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ParseError("expected a number");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

json state_to_json(const StateData& s) { return {{"version", SCHEMA_VERSION}, {"sigma", to_json(s.sigma())}}; }

StateData state_from_json(const json& j) { return StateData(matrix_from_json(need(j, "sigma"))); }

MatAlgebra algebra_from_json(const json& j) {
    int n = need(j, "ambient_dim").get<int>();
    std::vector<Matrix> gens = matrices(need(j, "generators"));
    for (const auto& g : gens)
        if (g.rows() != n || g.cols() != n) throw DimensionMismatch("algebra generator is not ambient_dim × ambient_dim");
    if (gens.empty()) gens.push_back(Matrix::Identity(n, n));
    return algebra_from_generators(gens);
}

json algebra_to_json(const MatAlgebra& a) {
    json blocks = json::array();
    for (auto [d, m] : a.signature()) blocks.push_back({{"dim", d}, {"mult", m}});
    return {{"version", SCHEMA_VERSION}, {"ambient_dim", a.ambient_dim()}, {"generators", matrices_json(a.basis())}, {"blocks", blocks}};
}

SuperOp superop_from_json(const json& j) {
    std::string kind = j.value("kind", std::string("matrix"));
    if (kind == "kraus") return generator_from_kraus(matrices(need(j, "ops")));
    if (kind == "hamiltonian_jump") return hamiltonian_jump(matrix_from_json(need(j, "h")), matrices(need(j, "jumps")));
    if (kind != "matrix") throw ParseError("unknown superoperator kind \"" + kind + "\"");
    int n = need(j, "dim").get<int>();
    Matrix m = matrix_from_json(need(j, "mat"));
    if (m.rows() != static_cast<Eigen::Index>(n) * n || m.cols() != m.rows()) throw DimensionMismatch("superoperator matrix must be n² × n²");
    return SuperOp(m);
}

json superop_to_json(const SuperOp& s) { return {{"version", SCHEMA_VERSION}, {"dim", s.dim()}, {"mat", to_json(s.mat())}}; }

ChainSpec chain_from_json(const json& j) {
    ChainSpec c;
    c.m = rvector_from_json(need(j, "m"));
    const json& q = need(j, "Q");
    if (!q.is_array()) throw ParseError("Q must be a matrix");
    c.q = RMatrix(static_cast<Eigen::Index>(q.size()), c.m.size());
    for (size_t i = 0; i < q.size(); ++i) {
        RVector row = rvector_from_json(q[i]);
        if (row.size() != c.m.size()) throw DimensionMismatch("Q rows must have |m| entries");
        c.q.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    c.symmetric = j.value("symmetric", true);
    c.validate();
    return c;
}

json chain_to_json(const ChainSpec& c) {
    json q = json::array();
    for (Eigen::Index i = 0; i < c.q.rows(); ++i) q.push_back(to_json(RVector(c.q.row(i).transpose())));
    return {{"version", SCHEMA_VERSION}, {"m", to_json(c.m)}, {"Q", q}, {"symmetric", c.symmetric}};
}

GroupSpec group_from_json(const json& j) {
    auto table = need(j, "cayley").get<std::vector<std::vector<int>>>();
    return group_from_table(j.value("name", std::string("G")), table, rvector_from_json(need(j, "ell")));
}

json group_to_json(const GroupSpec& g) {
    return {{"version", SCHEMA_VERSION}, {"name", g.name}, {"cayley", g.cayley}, {"ell", to_json(g.ell)}};
}

LoadedGenerator generator_from_json(const json& j, const std::optional<StateData>& state) {
    LoadedGenerator out;
    if (j.contains("m") && j.contains("Q")) {
        out.source_kind = "chain";
        out.chain = chain_from_json(j);
        out.generator = chain_to_generator(*out.chain);
        if (state) {
            if ((state->sigma() - out.generator.state->sigma()).norm() > 1e-10)
                throw StateMismatch("the given state is not diag(m) of the chain");
        }
        return out;
    }
    if (j.contains("cayley")) {
        out.source_kind = "group";
        out.group = group_from_json(j);
        out.generator = group_generator(*out.group);
        return out;
    }
    out.source_kind = "superop";
    SuperOp op = superop_from_json(j);
    std::optional<StateData> st = state;
    if (!st && j.contains("state")) st = state_from_json(j.at("state"));
    MatAlgebra alg = j.contains("algebra") ? algebra_from_json(j.at("algebra")) : full_algebra(op.dim());
    out.generator = make_generator(op, alg, st);
    return out;
}

json alicki_to_json(const AlickiForm& f) {
    json terms = json::array();
    for (const auto& t : f.terms) terms.push_back({{"c", t.c}, {"omega", t.omega}, {"v", to_json(t.v)}});
    json sectors = json::array();
    for (const auto& s : f.sectors) sectors.push_back({{"omega", s.omega}, {"dim", s.dim}, {"rank", s.rank}});
    return {{"version", SCHEMA_VERSION}, {"terms", terms}, {"pairing", f.pairing}, {"sectors", sectors}, {"diagnostics", f.diagnostics}};
}

AlickiForm alicki_from_json(const json& j) {
    AlickiForm f;
    for (const auto& t : need(j, "terms")) f.terms.push_back({need(t, "c").get<double>(), need(t, "omega").get<double>(), matrix_from_json(need(t, "v"))});
    f.pairing = need(j, "pairing").get<std::vector<int>>();
    if (f.pairing.size() != f.terms.size()) throw ParseError("pairing must have one entry per term");
    if (j.contains("sectors"))
        for (const auto& s : j.at("sectors")) f.sectors.push_back({s.at("omega").get<double>(), s.at("dim").get<int>(), s.at("rank").get<int>()});
    if (j.contains("diagnostics")) f.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    return f;
}

json xi_to_json(const XiVector& xi) {
    return {{"version", SCHEMA_VERSION}, {"stage", stage_name(xi.stage)}, {"vec", to_json(xi.vec)}, {"residuals", xi.residuals}};
}

XiVector xi_from_json(const json& j) {
    XiVector xi;
    std::string st = need(j, "stage").get<std::string>();
    if (st == "raw")
        xi.stage = XiVector::Stage::Raw;
    else if (st == "vt_invariant")
        xi.stage = XiVector::Stage::VtInvariant;
    else if (st == "fully_invariant")
        xi.stage = XiVector::Stage::FullyInvariant;
    else
        throw ParseError("unknown stage \"" + st + "\"");
    xi.vec = vector_from_json(need(j, "vec"));
    if (j.contains("residuals")) xi.residuals = j.at("residuals").get<std::map<std::string, double>>();
    return xi;
}

json bimodule_to_json(const BimoduleRep& rep) {
    json delta = json::array();
    for (const auto& v : rep.delta_vecs) delta.push_back(to_json(v));
    return {{"version", SCHEMA_VERSION},
            {"algebra", algebra_to_json(rep.algebra)},
            {"state", state_to_json(rep.state)},
            {"dim", rep.dim},
            {"raw_gram", to_json(rep.raw_gram)},
            {"kernel", to_json(rep.kernel)},
            {"embed", to_json(rep.embed)},
            {"lift", to_json(rep.lift)},
            {"gram_spectrum", to_json(rep.gram_spectrum)},
            {"borderline", rep.borderline},
            {"left", matrices_json(rep.left)},
            {"right", matrices_json(rep.right)},
            {"module_right", matrices_json(rep.module_right)},
            {"delta", delta},
            {"ut_gen", to_json(rep.ut_gen)},
            {"jj", to_json(rep.jj)}};
}

BimoduleRep bimodule_from_json(const json& j) {
    BimoduleRep rep;
    const json& a = need(j, "algebra");
    // The stored generators are the trace-orthonormal basis itself.
    rep.algebra = MatAlgebra::from_orthonormal(need(a, "ambient_dim").get<int>(), matrices(need(a, "generators")));
    rep.state = state_from_json(need(j, "state"));
    rep.dim = need(j, "dim").get<int>();
    rep.raw_gram = matrix_from_json(need(j, "raw_gram"));
    rep.kernel = matrix_from_json(need(j, "kernel"));
    rep.embed = matrix_from_json(need(j, "embed"));
    rep.lift = matrix_from_json(need(j, "lift"));
    rep.gram_spectrum = rvector_from_json(need(j, "gram_spectrum"));
    rep.borderline = need(j, "borderline").get<int>();
    rep.left = matrices(need(j, "left"));
    rep.right = matrices(need(j, "right"));
    rep.module_right = matrices(need(j, "module_right"));
    for (const auto& v : need(j, "delta")) rep.delta_vecs.push_back(vector_from_json(v));
    rep.ut_gen = matrix_from_json(need(j, "ut_gen"));
    rep.jj = matrix_from_json(need(j, "jj"));
    const size_t d = static_cast<size_t>(rep.algebra.dim());
    if (rep.left.size() != d || rep.right.size() != d || rep.module_right.size() != d || rep.delta_vecs.size() != d)
        throw ParseError("bimodule action lists must have one entry per basis element");
    return rep;
}

}  // namespace qms::io
