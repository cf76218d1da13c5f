// cli.cpp — job orchestration and report assembly for the `qms` front end
#include "qms/cli.hpp"

#include "qms/fock.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>

namespace qms::cli {

using io::json;

namespace {

class Table {
public:
    void add(const std::string& name, double value, double tol) {
        bool pass = std::isfinite(value) && value <= tol;
        rows_[name] = {{"value", value}, {"tol", tol}, {"pass", pass}};
        ok_ = ok_ && pass;
    }
    bool ok() const { return ok_; }
    const json& rows() const { return rows_; }

private:
    json rows_ = json::object();
    bool ok_ = true;
};

struct Context {
    const JobSpec& job;
    double tol;
    Table table;
    json artifacts = json::object();
    json flags = json::object();
    std::vector<double> grid(std::vector<double> fallback) const { return job.t_grid.empty() ? fallback : job.t_grid; }
};

const std::string& input(const JobSpec& job, const std::string& role) {
    auto it = job.inputs.find(role);
    if (it == job.inputs.end() || it->second.empty()) throw io::ParseError("missing required input --" + role);
    return it->second;
}

std::optional<StateData> optional_state(const JobSpec& job) {
    auto it = job.inputs.find("state");
    if (it == job.inputs.end() || it->second.empty()) return std::nullopt;
    return io::state_from_json(io::read_file(it->second));
}

io::LoadedGenerator load_generator(const JobSpec& job, const std::string& role = "generator") {
    auto loaded = io::generator_from_json(io::read_file(input(job, role)), optional_state(job));
    auto it = job.inputs.find("algebra");
    if (it != job.inputs.end() && !it->second.empty() && loaded.source_kind == "superop") {
        MatAlgebra alg = io::algebra_from_json(io::read_file(it->second));
        loaded.generator = make_generator(loaded.generator.op, alg, loaded.generator.state);
    }
    return loaded;
}

const StateData& need_state(const QMSGenerator& l) {
    if (!l.state) throw StateMismatch("this command needs a reference state (--state or an embedded one)");
    return *l.state;
}

json stages_json(const CEResult& ce) {
    return {{"raw", io::xi_to_json(ce.xi_raw)}, {"vt_invariant", io::xi_to_json(ce.xi_vt)}, {"fully_invariant", io::xi_to_json(ce.xi)}};
}

// check: DBC / CND / CP flags.
void cmd_check(Context& c) {
    QMSGenerator l = load_generator(c.job).generator;
    const MatAlgebra& alg = l.algebra;
    double scale = std::max(1.0, restricted_matrix(l.op, alg).norm());
    const int n = l.dim();
    c.table.add("unital", l(Matrix::Identity(n, n)).norm() / scale, c.tol);
    c.table.add("hermiticity", l.op.hermiticity_residual() / scale, c.tol);
    CndVerdict v = cnd_check(l);
    c.table.add("cnd", std::max(0.0, -v.min_eig), c.tol);
    c.flags["CND"] = v.cnd();
    c.artifacts["cnd_min_eig"] = v.min_eig;

    SuperOp proj(alg.basis_matrix() * alg.basis_matrix().adjoint());
    bool cp = true;
    for (double t : c.grid({0.1, 1.0})) {
        if (t < 0) continue;
        MarkovFlags mf = markov_check(semigroup(l, t) * proj);
        std::string key = "t=" + json(t).dump();
        c.table.add("semigroup_cp[" + key + "]", std::max(0.0, -mf.cp_min_eig), c.tol);
        cp = cp && mf.cp_min_eig >= -c.tol;
    }
    c.flags["CP"] = cp;
    if (l.state) {
        double sym = gns_symmetric_check_on(l.op, *l.state, alg) / scale;
        c.table.add("gns_symmetric", sym, c.tol);
        c.table.add("modular_commutation", modular_commutation_check_on(l.op, *l.state, alg, c.grid(default_t_grid())) / scale, c.tol);
        c.flags["DBC"] = sym <= c.tol;
    } else {
        c.flags["DBC"] = nullptr;
    }
    c.artifacts["algebra"] = {{"dim", alg.dim()}, {"ambient_dim", alg.ambient_dim()}};
    json blocks = json::array();
    for (auto [d, m] : alg.signature()) blocks.push_back({{"dim", d}, {"mult", m}});
    c.artifacts["algebra"]["blocks"] = blocks;
}

// decompose: Alicki form and its round trip.
void cmd_decompose(Context& c) {
    QMSGenerator l = load_generator(c.job).generator;
    const StateData& s = need_state(l);
    AlickiForm f = alicki_decompose(l, s, c.tol);
    double scale = std::max(1e-300, l.op.norm());
    c.table.add("round_trip", (alicki_rebuild(f, l.dim()).mat() - l.op.mat()).norm() / std::max(1.0, scale), c.tol);
    AlickiInvariants inv = alicki_invariants(f, s);
    c.table.add("traceless", inv.traceless, c.tol);
    c.table.add("orthonormal", inv.orthonormal, c.tol);
    c.table.add("pairing", inv.pairing, c.tol);
    c.table.add("eigen", inv.eigen, c.tol);
    c.artifacts["alicki"] = io::alicki_to_json(f);
}

// extend: lift from the subalgebra to M.
void cmd_extend(Context& c) {
    io::LoadedGenerator sub = load_generator(c.job, "sub");
    QMSGenerator& l = sub.generator;
    std::optional<StateData> shat = optional_state(c.job);
    if (!shat) shat = need_state(l);
    MatAlgebra m;
    auto it = c.job.inputs.find("ambient");
    if (it != c.job.inputs.end() && !it->second.empty())
        m = io::algebra_from_json(io::read_file(it->second));
    else
        m = full_algebra(c.job.ambient_dim.value_or(l.dim()));
    if (m.ambient_dim() != l.dim()) throw DimensionMismatch("--ambient-dim must equal the size of the subalgebra's matrices");
    // The subalgebra generator carries the restricted state.
    if (l.state) {
        Matrix restricted = l.algebra.project(shat->sigma());
        l.state = StateData(restricted);
    }
    Extension ext = extend(l, m, *shat);
    for (const auto& [name, value] : ext.residuals) {
        if (name == "cnd_min_eig") continue;
        double t = (name == "restrict_semigroup" || name == "expectation_commutes") ? std::max(c.tol, 1e-8) : c.tol;
        c.table.add(name, value, t);
    }
    c.table.add("cnd", std::max(0.0, -ext.residuals.at("cnd_min_eig")), c.tol);
    if (sub.chain) {
        double diff = (ext.generator.op.mat() - chain_extension_formula(*sub.chain).mat()).cwiseAbs().maxCoeff();
        c.table.add("closed_form", diff, std::min(c.tol, 1e-10));
    }
    c.artifacts["k"] = io::to_json(ext.k);
    c.artifacts["phi"] = io::superop_to_json(ext.ce.phi);
    c.artifacts["generator"] = io::superop_to_json(ext.generator.op);
    c.artifacts["xi"] = stages_json(ext.ce);
}

// fock-verify: Tomita items and the truncated Fock identities.
void cmd_fock(Context& c) {
    QMSGenerator l = load_generator(c.job).generator;
    const StateData& s = need_state(l);
    CEResult ce = ce_pipeline(l, s);
    double scale = std::max(1.0, l.op.norm());
    c.table.add("ce_identity", ce.ce_residual / scale, c.tol);
    TomitaReport tr = tomita_check(ce.rep, l, c.grid({-2.7, -1.0, -0.3, 0.3, 1.0, 2.7}));
    c.table.add("tomita_a", tr.item_a, c.tol);
    c.table.add("tomita_b", tr.item_b, c.tol);
    c.table.add("tomita_c", tr.item_c, c.tol);
    c.table.add("tomita_d", tr.item_d, c.tol);
    c.table.add("tomita_e", tr.item_e, c.tol);
    FockRep f = build_fock(ce.rep, ce.xi);
    FockReport fr = fock_check(f, l, c.grid({-1.0, 0.3, 2.7}));
    c.table.add("s_hermitian", fr.s_hermitian, c.tol);
    c.table.add("expectation_a", fr.expectation_a, c.tol);
    c.table.add("expectation_s", fr.expectation_s, c.tol);
    c.table.add("alpha_delta", fr.alpha_delta, c.tol);
    c.table.add("alpha_bimodule", fr.alpha_bimodule, c.tol);
    c.table.add("mvalued", fr.mvalued, c.tol);
    c.table.add("gamma", fr.gamma, c.tol);
    c.table.add("centralizer", fr.centralizer, c.tol);
    c.table.add("covariance", fr.covariance, c.tol);
    c.table.add("commutant", fr.commutant, c.tol);
    c.table.add("tensor_unit", fr.tensor_unit, c.tol);
    c.table.add("left_bounded", fr.left_bounded, c.tol);
    c.artifacts["levels"] = {f.dims[0], f.dims[1], f.dims[2]};
    c.artifacts["xi"] = stages_json(ce);
}

// haar-test: Monte-Carlo implementing vector against the exact one.
void cmd_haar(Context& c) {
    QMSGenerator l = load_generator(c.job).generator;
    const StateData& s = need_state(l);
    BimoduleRep rep = build_gns_bimodule(l.algebra, l, s);
    XiVector exact = vt_project(rep, solve_inner_vector(rep));
    c.table.add("exact_implementation", rep.implementation_residual(exact.vec) / std::max(1.0, rep.delta_norm()), c.tol);
    std::vector<int> sizes = c.job.samples.empty() ? std::vector<int>{1000, 4000} : c.job.samples;
    json runs = json::array();
    for (int n : sizes) {
        HaarEstimate e = haar_inner_vector(rep, n, c.job.seed);
        runs.push_back({{"samples", n}, {"residual", e.residual}, {"trend", e.trend}});
    }
    c.artifacts["haar"] = runs;
    c.artifacts["dim_h"] = rep.dim;
}

// evolve: P_t(x) = e^{−tL}x on the grid.
void cmd_evolve(Context& c) {
    QMSGenerator l = load_generator(c.job).generator;
    io::json in = io::read_file(input(c.job, "input"));
    Matrix x = io::matrix_from_json(in.contains("x") ? in.at("x") : in);
    if (x.rows() != l.dim() || x.cols() != l.dim()) throw DimensionMismatch("input matrix does not match the generator size");
    const MatAlgebra& alg = l.algebra;
    SuperOp proj(alg.basis_matrix() * alg.basis_matrix().adjoint());
    json traj = json::array();
    for (double t : c.grid({0.1, 1.0})) {
        if (t < 0) throw std::invalid_argument("evolve: times must be nonnegative");
        SuperOp p = semigroup(l, t);
        MarkovFlags mf = markov_check(p * proj);
        std::string key = "t=" + json(t).dump();
        c.table.add("cp[" + key + "]", std::max(0.0, -mf.cp_min_eig), c.tol);
        c.table.add("unital[" + key + "]", mf.unital, c.tol);
        traj.push_back({{"t", t}, {"x", io::to_json(Matrix(p(alg.project(x))))}});
    }
    c.artifacts["trajectory"] = traj;
}

const std::map<std::string, std::function<void(Context&)>>& handlers() {
    static const std::map<std::string, std::function<void(Context&)>> h = {
        {"check", cmd_check}, {"decompose", cmd_decompose}, {"extend", cmd_extend},
        {"fock-verify", cmd_fock}, {"haar-test", cmd_haar}, {"evolve", cmd_evolve}};
    return h;
}

std::string digest(const JobSpec& job) {
    std::string all;
    for (const auto& [role, path] : job.inputs) {
        if (path.empty()) continue;
        all += role;
        all += '\0';
        try {
            all += io::read_text(path);
        } catch (const io::ParseError&) {
            all += "<unreadable>";
        }
        all += '\0';
    }
    return io::fnv1a_hex(all);
}

}  // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> c = {"check", "decompose", "extend", "fock-verify", "haar-test", "evolve"};
    return c;
}

double resolve_tolerance(const JobSpec& job) {
    if (job.tol) return *job.tol;
    if (const char* env = std::getenv("QMS_TOL")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return DEFAULT_TOL;
}

Report run(const JobSpec& job) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    json& b = rep.body;
    b["version"] = io::SCHEMA_VERSION;
    b["command"] = job.command;
    b["seed"] = job.seed;
    json inputs = json::object();
    for (const auto& [role, path] : job.inputs)
        if (!path.empty()) inputs[role] = path;
    b["inputs"] = inputs;
    b["inputs_digest"] = digest(job);
    double tol = resolve_tolerance(job);
    b["tolerance"] = tol;
    if (!job.t_grid.empty()) b["t_grid"] = job.t_grid;

    auto fail = [&](int code, const std::string& name, const std::string& msg) {
        rep.exit_code = code;
        b["status"] = "error";
        b["error"] = {{"name", name}, {"message", msg}};
    };

    Context ctx{job, tol, {}, json::object(), json::object()};
    auto h = handlers().find(job.command);
    if (h == handlers().end()) {
        fail(EXIT_PARSE, "ParseError", "unknown command \"" + job.command + "\"");
    } else {
        try {
            h->second(ctx);
            rep.exit_code = ctx.table.ok() ? EXIT_OK : EXIT_RESIDUAL;
            b["status"] = ctx.table.ok() ? "ok" : "residual_exceeded";
        } catch (const io::ParseError& e) {
            fail(EXIT_PARSE, "ParseError", e.what());
        } catch (const json::exception& e) {
            fail(EXIT_PARSE, "ParseError", e.what());
        } catch (const std::invalid_argument& e) {
            fail(EXIT_PARSE, "InvalidArgument", e.what());
        } catch (const Error& e) {
            fail(e.kind() == Error::Kind::Precondition ? EXIT_PRECONDITION : EXIT_NUMERICAL, e.name(), e.what());
        }
    }
    b["residuals"] = ctx.table.rows();
    b["artifacts"] = ctx.artifacts;
    b["flags"] = ctx.flags;
    b["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::string render(const Report& r, bool with_time) {
    json b = r.body;
    if (!with_time) b.erase("wall_time_s");
    return b.dump(2) + "\n";
}

}  // namespace qms::cli
