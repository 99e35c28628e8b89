#include "orlicz/ccp.hpp"
#include "orlicz/config.hpp"
#include "orlicz/csv.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/grid.hpp"
#include "orlicz/matuszewska.hpp"
#include "orlicz/mountain_pass.hpp"
#include "orlicz/sobolev.hpp"
#include "orlicz/suite.hpp"
#include "orlicz/young.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace orlicz;

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw ConfigError("log grid needs 0 < lo < hi and at least 2 samples");
    std::vector<double> t(count);
    const double llo = std::log(lo), dl = (std::log(hi) - llo) / (count - 1);
    for (int i = 0; i < count; ++i) t[i] = std::exp(llo + i * dl);
    t.front() = lo;
    t.back() = hi;
    return t;
}

// Deterministic uniform doubles in [lo, hi), independent of the standard
// library's distribution internals.
class UniformLog {
  public:
    UniformLog(unsigned long long seed, double lo, double hi)
        : rng_(seed), llo_(std::log(lo)), lspan_(std::log(hi) - std::log(lo)) {}
    double operator()() {
        const double u = (rng_() >> 11) * 0x1.0p-53;
        return std::exp(llo_ + u * lspan_);
    }

  private:
    std::mt19937_64 rng_;
    double llo_, lspan_;
};

std::string bool_field(bool b) { return b ? "true" : "false"; }

struct Run {
    Config cfg;
    fs::path config_dir;
    fs::path out_dir;
    ToleranceBook tol;
    json status = json::object();
    std::vector<std::string> outputs;

    explicit Run(double tol_scale) : tol(tol_scale) {}

    void write_output(const std::string& name, const std::string& content) {
        atomic_write((out_dir / name).string(), content);
        outputs.push_back(name);
    }

    int finish(const std::string& command, int code) {
        json m;
        m["command"] = command;
        m["config_hash"] = cfg.content_hash();
        m["exit_code"] = code;
        m["outputs"] = outputs;
        m["status"] = status;
        m["tol_scale"] = tol.scale();
        m["tolerances"] = tol.entries();
        m["version"] = kToolVersion;
        atomic_write((out_dir / "manifest.json").string(), m.dump(2) + "\n");
        return code;
    }
};

const std::set<std::string> kYoungKeys = {"young.family", "young.p",     "young.q",
                                          "young.scale",  "young.table", "young.step"};
const std::set<std::string> kDomainKeys = {"domain.dim", "domain.extent", "domain.cells"};

std::set<std::string> allowed_keys(std::initializer_list<const std::set<std::string>*> groups,
                                   std::initializer_list<const char*> extra) {
    std::set<std::string> all = {"out"};
    for (const auto* g : groups) all.insert(g->begin(), g->end());
    for (const char* k : extra) all.insert(k);
    return all;
}

YoungFunction make_young(const Run& run) {
    const Config& c = run.cfg;
    const std::string family = c.text("young.family");
    if (family == "power")
        return YoungFunction::power(c.number("young.p"), c.number_or("young.scale", 1.0));
    if (family == "power_log")
        return YoungFunction::power_log(c.number("young.p"), c.number_or("young.q", 1.0),
                                        c.number_or("young.scale", 1.0));
    if (family == "table") {
        fs::path p = c.text("young.table");
        if (p.is_relative()) p = run.config_dir / p;
        if (!fs::exists(p))
            throw ConfigError("young.table: file not found: " + p.string());
        auto [t, a] = load_density_csv(p.string());
        return YoungFunction::from_density_samples(std::move(t), std::move(a),
                                                   c.boolean_or("young.step", false));
    }
    throw ConfigError("young.family must be \"power\", \"power_log\", or \"table\" (got \"" +
                      family + "\")");
}

Domain make_domain(const Config& c) {
    const int dim = c.integer("domain.dim");
    const std::vector<double> extent = c.numbers("domain.extent");
    const std::vector<double> cells = c.numbers("domain.cells");
    if (dim == 1) {
        if (extent.size() != 1 || cells.size() != 1)
            throw ConfigError("domain.dim = 1 needs one extent and one cell count");
        return Domain::interval(extent[0], static_cast<int>(cells[0]));
    }
    if (dim == 2) {
        if (extent.size() != 2 || cells.size() != 2)
            throw ConfigError("domain.dim = 2 needs two extents and two cell counts");
        return Domain::box(extent[0], extent[1], static_cast<int>(cells[0]),
                           static_cast<int>(cells[1]));
    }
    throw ConfigError("domain.dim must be 1 or 2");
}

std::array<double, 2> domain_center(const Domain& dom) {
    return {0.5 * dom.extent[0], dom.dim == 2 ? 0.5 * dom.extent[1] : 0.0};
}

json indices_json(const GrowthIndices& idx) {
    json j;
    j["p_minus"] = idx.p_minus;
    j["p_plus"] = idx.p_plus;
    j["delta2_constant"] = idx.delta2_constant;
    return j;
}

int cmd_inspect(Run& run) {
    run.cfg.require_known(
        allowed_keys({&kYoungKeys}, {"range.t_lo", "range.t_hi", "range.samples"}));
    const YoungFunction Y = make_young(run);
    const double t_lo = run.cfg.number_or("range.t_lo", 1e-6);
    const double t_hi = run.cfg.number_or("range.t_hi", 1e6);
    const int samples = run.cfg.integer_or("range.samples", 257);

    CsvWriter w({"t", "value", "density", "growth_ratio"});
    for (double t : log_grid(t_lo, t_hi, samples))
        w.add_row({csv_field(t), csv_field(Y.value(t)), csv_field(Y.density(t)),
                   csv_field(Y.growth_ratio(t))});
    run.write_output("function.csv", w.str());

    const IndexEstimate est = estimate_indices(Y, {t_lo, t_hi});
    run.status["function"] = Y.describe();
    run.status["non_doubling"] = est.non_doubling;
    if (est.indices) {
        run.status["indices"] = indices_json(*est.indices);
        std::printf("[inspect] %s  p- = %.6g  p+ = %.6g  C_delta2 = %.6g\n",
                    Y.describe().c_str(), est.indices->p_minus, est.indices->p_plus,
                    est.indices->delta2_constant);
    } else {
        run.status["diagnosis"] = est.diagnosis;
        std::printf("[inspect] %s  no finite growth indices: %s\n", Y.describe().c_str(),
                    est.diagnosis.c_str());
    }
    return run.finish("inspect", 0);
}

int cmd_conjugate(Run& run) {
    run.cfg.require_known(allowed_keys({&kYoungKeys}, {"range.s_lo", "range.s_hi",
                                                       "range.samples", "check.pairs",
                                                       "check.t_lo", "check.t_hi"}));
    const YoungFunction Y = make_young(run);
    const YoungFunction conj = Y.conjugate();
    const double s_lo = run.cfg.number_or("range.s_lo", 0.01);
    const double s_hi = run.cfg.number_or("range.s_hi", 100.0);
    const int samples = run.cfg.integer_or("range.samples", 257);

    CsvWriter w({"s", "value", "density"});
    for (double s : log_grid(s_lo, s_hi, samples))
        w.add_row({csv_field(s), csv_field(conj.value(s)), csv_field(conj.density(s))});
    run.write_output("conjugate.csv", w.str());

    const int pairs = run.cfg.integer_or("check.pairs", 10000);
    const double t_lo = run.cfg.number_or("check.t_lo", 1e-2);
    const double t_hi = run.cfg.number_or("check.t_hi", 1e2);
    const double slack = run.tol.use("conjugate.young_slack", 1e-12);
    UniformLog draw(20240817ull, t_lo, t_hi);
    int violations = 0;
    double worst = 0.0;
    for (int k = 0; k < pairs; ++k) {
        const double t = draw(), s = draw();
        const double bound = Y.value(t) + conj.value(s);
        const double excess = s * t - bound * (1.0 + slack);
        if (excess > 0.0) {
            ++violations;
            worst = std::max(worst, excess / bound);
        }
    }
    run.status["function"] = Y.describe();
    run.status["conjugate"] = conj.describe();
    run.status["young_pairs"] = pairs;
    run.status["young_violations"] = violations;
    run.status["young_worst_excess"] = worst;
    std::printf("[conjugate] %s  duality pairs = %d  violations = %d\n", Y.describe().c_str(),
                pairs, violations);
    return run.finish("conjugate", violations == 0 ? 0 : 1);
}

int cmd_sobolev(Run& run) {
    run.cfg.require_known(allowed_keys({&kYoungKeys},
                                       {"n", "build.t_lo", "build.t_hi", "build.per_decade",
                                        "check.t_lo", "check.t_hi"}));
    const YoungFunction Y = make_young(run);
    const int n = run.cfg.integer("n");
    SobolevBuildOptions opt;
    opt.t_lo = run.cfg.number_or("build.t_lo", opt.t_lo);
    opt.t_hi = run.cfg.number_or("build.t_hi", opt.t_hi);
    opt.per_decade = run.cfg.integer_or("build.per_decade", opt.per_decade);
    const SobolevConjugate S = build_sobolev_conjugate(Y, n, opt);

    CsvWriter wh({"t", "H"});
    const auto& nodes = S.H.nodes();
    const auto& values = S.H.values();
    for (size_t i = 0; i < nodes.size(); ++i)
        wh.add_row({csv_field(nodes[i]), csv_field(values[i])});
    run.write_output("h_table.csv", wh.str());

    CsvWriter wa({"t", "An", "H_inverse"});
    for (double t : log_grid(S.H.h_lo(), S.H.h_hi(), 257))
        wa.add_row({csv_field(t), csv_field(S.An.value(t)), csv_field(S.H.inverse(t))});
    run.write_output("an_table.csv", wa.str());

    const Interval window{run.cfg.number_or("check.t_lo", 1.0),
                          run.cfg.number_or("check.t_hi", 1e4)};
    const double rel_tol = run.tol.use("sobolev.bounds_rel_tol", 1e-7);
    const AnchoredBounds hb = check_H_bounds(S, window, 512, rel_tol);
    const AnchoredBounds ab = check_An_power_bounds(S, window, 512, rel_tol);
    const DoublingInheritance dh = check_An_delta2(S);

    run.status["base_indices"] = indices_json(S.base_indices);
    run.status["an_indices"] = indices_json(S.An_indices);
    run.status["h_bounds"] = {{"holds", hb.holds}, {"C1", hb.C1}, {"C2", hb.C2}};
    run.status["an_bounds"] = {{"holds", ab.holds}, {"C1", ab.C1}, {"C2", ab.C2}};
    run.status["doubling"] = {{"holds", dh.holds}, {"delta0", dh.delta0}, {"C0", dh.C0}};
    const bool ok = hb.holds && ab.holds && dh.holds;
    std::printf("[sobolev] %s  n = %d  An p- = %.6g  p+ = %.6g  checks %s\n",
                Y.describe().c_str(), n, S.An_indices.p_minus, S.An_indices.p_plus,
                ok ? "passed" : "FAILED");
    return run.finish("sobolev", ok ? 0 : 1);
}

int cmd_norm(Run& run) {
    run.cfg.require_known(allowed_keys({&kYoungKeys, &kDomainKeys},
                                       {"bumps.widths", "bumps.powers", "bumps.amplitudes"}));
    const YoungFunction Y = make_young(run);
    const Domain dom = make_domain(run.cfg);
    const IndexEstimate est = estimate_indices(Y, {1e-6, 1e6});
    if (!est.indices)
        throw UnsupportedRegimeError("norm command needs a doubling Young function: " +
                                     est.diagnosis);

    std::vector<double> widths = run.cfg.has("bumps.widths")
                                     ? run.cfg.numbers("bumps.widths")
                                     : std::vector<double>{0.4, 0.25, 0.125};
    std::vector<double> powers = run.cfg.has("bumps.powers") ? run.cfg.numbers("bumps.powers")
                                                             : std::vector<double>{2.0};
    std::vector<double> amps = run.cfg.has("bumps.amplitudes")
                                   ? run.cfg.numbers("bumps.amplitudes")
                                   : std::vector<double>{1.0};

    const double lux_tol = run.tol.use("norm.luxemburg_rel_tol", 1e-12);
    const double unit_tol = run.tol.use("norm.unit_modular_tol", 1e-8);
    const double bounds_tol = run.tol.use("norm.bounds_rel_tol", 1e-8);

    CsvWriter w({"width", "power", "amplitude", "norm", "modular", "unit_modular"});
    bool ok = true;
    double worst_unit = 0.0;
    for (double width : widths)
        for (double power : powers)
            for (double amp : amps) {
                GridFunction u = make_bump(dom, domain_center(dom), width, power);
                for (double& v : u.values()) v *= amp;
                const double nrm = luxemburg_norm(Y, u, lux_tol);
                const double mod = modular(Y, u);
                GridFunction unit = u;
                for (double& v : unit.values()) v /= nrm;
                const double unit_mod = modular(Y, unit);
                worst_unit = std::max(worst_unit, std::fabs(unit_mod - 1.0));
                if (std::fabs(unit_mod - 1.0) > unit_tol) ok = false;
                if (!check_norm_modular_bounds(Y, *est.indices, u, bounds_tol)) ok = false;
                w.add_row({csv_field(width), csv_field(power), csv_field(amp), csv_field(nrm),
                           csv_field(mod), csv_field(unit_mod)});
            }
    run.write_output("norm.csv", w.str());
    run.status["function"] = Y.describe();
    run.status["cases"] = static_cast<int>(w.rows());
    run.status["worst_unit_modular_error"] = worst_unit;
    std::printf("[norm] %s  %zu cases  worst |Phi(u/||u||) - 1| = %.3e  %s\n",
                Y.describe().c_str(), w.rows(), worst_unit, ok ? "ok" : "FAILED");
    return run.finish("norm", ok ? 0 : 1);
}

int cmd_ccp(Run& run) {
    run.cfg.require_known(allowed_keys({&kYoungKeys, &kDomainKeys},
                                       {"bubble.center", "bubble.scales",
                                        "bubble.profile_power", "bubble.normalization",
                                        "bubble.bound", "atoms.delta", "check.safety",
                                        "background.center", "background.width",
                                        "background.power"}));
    const YoungFunction A = make_young(run);
    const Domain dom = make_domain(run.cfg);
    if (dom.dim != 2) throw ConfigError("ccp diagnostics need domain.dim = 2");
    const SobolevConjugate S = build_sobolev_conjugate(A, dom.dim);

    BubbleSpec spec;
    if (run.cfg.has("bubble.center")) {
        const std::vector<double> c = run.cfg.numbers("bubble.center");
        if (c.size() != 2) throw ConfigError("bubble.center needs two coordinates");
        spec.center = {c[0], c[1]};
    } else {
        spec.center = domain_center(dom);
    }
    spec.scales = run.cfg.numbers("bubble.scales");
    spec.profile_power = run.cfg.number_or("bubble.profile_power", spec.profile_power);
    spec.bound = run.cfg.number_or("bubble.bound", spec.bound);
    const std::string norm_kind = run.cfg.text_or("bubble.normalization", "an_mass");
    if (norm_kind == "an_mass")
        spec.normalization = BubbleSpec::Normalization::AnMassOne;
    else if (norm_kind == "gradient")
        spec.normalization = BubbleSpec::Normalization::GradientABounded;
    else
        throw ConfigError("bubble.normalization must be \"an_mass\" or \"gradient\"");

    const double delta = run.cfg.number_or("atoms.delta", 0.25);
    const double safety = run.cfg.number_or("check.safety", 0.9);

    const std::vector<GridFunction> bubbles = make_bubbles(dom, A, S.An, spec);
    const MatuszewskaProfile Mn = build_mo_profile(S.An);
    const double S_est = estimate_sobolev_constant(S, dom).value;
    const double min_ext = std::min(dom.extent[0], dom.extent[1]);
    const GridFunction phi = make_bump(dom, domain_center(dom), 0.45 * min_ext, 2.0);

    // The Brezis-Lieb study wants f_k -> f almost everywhere with the excess
    // concentrating, so the background sits off the bubble center and the
    // residual collapses once the supports separate.
    std::array<double, 2> bg_center{0.3 * dom.extent[0], 0.3 * dom.extent[1]};
    if (run.cfg.has("background.center")) {
        const std::vector<double> c = run.cfg.numbers("background.center");
        if (c.size() != 2) throw ConfigError("background.center needs two coordinates");
        bg_center = {c[0], c[1]};
    }
    const GridFunction background =
        make_bump(dom, bg_center, run.cfg.number_or("background.width", 0.2 * min_ext),
                  run.cfg.number_or("background.power", 2.0));
    const std::vector<double> bl =
        [&] {
            std::vector<GridFunction> fk;
            fk.reserve(bubbles.size());
            for (const GridFunction& b : bubbles) {
                GridFunction f = background;
                for (int i = 0; i < f.size(); ++i) f.values()[i] += b.values()[i];
                fk.push_back(std::move(f));
            }
            return brezis_lieb_residual(S.An, fk, background, phi);
        }();

    CsvWriter w({"k", "eps", "total_nu", "total_mu", "atoms", "atom_x", "atom_y", "rh_lhs",
                 "rh_rhs", "bl_residual"});
    bool ok = true;
    AtomReport finest;
    for (size_t k = 0; k < bubbles.size(); ++k) {
        const auto [nu, mu] = measure_pair(A, S.An, bubbles[k]);
        const AtomReport rep = detect_atoms(nu, mu, delta);
        double atom_sum = 0.0;
        for (const Atom& at : rep.atoms) atom_sum += at.nu_mass;
        if (rep.total_nu - atom_sum != rep.residual_mass) ok = false;
        const ReverseHolderResult rh =
            verify_reverse_holder(S_est, Mn, S.base_indices, phi, nu, mu, safety);
        // The reverse Holder bound is a statement about concentrated mass, so
        // it is asserted only on members where an atom was actually detected.
        if (!rh.holds && !rh.vacuous && !rep.atoms.empty()) ok = false;
        const double ax = rep.atoms.empty() ? 0.0 : rep.atoms.front().x[0];
        const double ay = rep.atoms.empty() ? 0.0 : rep.atoms.front().x[1];
        w.add_row({csv_field(static_cast<double>(k)), csv_field(spec.scales[k]),
                   csv_field(rep.total_nu), csv_field(mu.total()),
                   csv_field(static_cast<double>(rep.atoms.size())), csv_field(ax),
                   csv_field(ay), csv_field(rh.lhs), csv_field(rh.rhs), csv_field(bl[k])});
        if (k + 1 == bubbles.size()) finest = rep;
    }
    run.write_output("ccp.csv", w.str());

    int atom_checks = 0, atom_failures = 0;
    for (const AtomRelationResult& ar :
         verify_atom_relation(S_est, Mn, S.base_indices, finest, safety)) {
        if (ar.skipped) continue;
        ++atom_checks;
        if (!ar.holds) {
            ++atom_failures;
            ok = false;
        }
    }
    run.status["function"] = A.describe();
    run.status["sobolev_constant_upper_bound"] = S_est;
    run.status["safety"] = safety;
    run.status["finest_atoms"] = static_cast<int>(finest.atoms.size());
    run.status["atom_relation_checks"] = atom_checks;
    run.status["atom_relation_failures"] = atom_failures;
    std::printf("[ccp] %zu members  finest atoms = %zu  %s\n", bubbles.size(),
                finest.atoms.size(), ok ? "ok" : "FAILED");
    return run.finish("ccp", ok ? 0 : 1);
}

const std::set<std::string> kProblemKeys = {
    "problem.r",      "problem.gamma",        "problem.eps_reg",
    "problem.lambda", "problem.critical_term"};
const std::set<std::string> kSolverKeys = {"solver.path_nodes", "solver.max_iterations",
                                           "solver.tolerance", "solver.descent_steps"};

ProblemSpec make_problem(Run& run, bool needs_lambda) {
    ProblemSpec P;
    P.A = make_young(run);
    P.dom = make_domain(run.cfg);
    P.r = run.cfg.number("problem.r");
    P.gamma = run.cfg.number_or("problem.gamma", P.r);
    P.critical_term = run.cfg.boolean_or("problem.critical_term", true);
    P.eps_reg = run.cfg.number_or("problem.eps_reg", 0.0);
    if (needs_lambda) P.lambda = run.cfg.number("problem.lambda");

    if (P.critical_term) {
        SobolevConjugate S = build_sobolev_conjugate(P.A, P.dom.dim);
        P.idx = S.base_indices;
        const double pn_minus = S.An_indices.p_minus;
        if (!(P.idx.p_plus < P.gamma && P.gamma < pn_minus))
            throw ConfigError("problem.gamma must lie strictly between p+ and the critical "
                              "index of the conjugate");
        if (!(P.idx.p_plus < P.r && P.r < pn_minus))
            throw ConfigError("problem.r must lie strictly between p+ and the critical index "
                              "of the conjugate");
        const ComparisonVerdict v = compare(P.perturbation_bound(), S.An);
        if (v.relation != Relation::ESSENTIALLY_SMALLER)
            throw ConfigError("the perturbation bound must grow essentially slower than the "
                              "conjugate; lower problem.r");
        run.status["critical_indices"] = indices_json(S.An_indices);
        P.S = std::move(S);
    } else {
        const IndexEstimate est = estimate_indices(P.A, {1e-6, 1e6});
        if (!est.indices)
            throw UnsupportedRegimeError("solver needs a doubling Young function: " +
                                         est.diagnosis);
        P.idx = *est.indices;
        if (!(P.idx.p_plus < P.gamma))
            throw ConfigError("problem.gamma must exceed p+");
    }
    run.status["base_indices"] = indices_json(P.idx);
    return P;
}

MountainPassOptions make_solver_options(Run& run) {
    MountainPassOptions opt;
    opt.path_nodes = run.cfg.integer_or("solver.path_nodes", opt.path_nodes);
    opt.max_iterations = run.cfg.integer_or("solver.max_iterations", opt.max_iterations);
    opt.tolerance = run.tol.use("solver.tolerance",
                                run.cfg.number_or("solver.tolerance", opt.tolerance));
    opt.descent_steps_per_iteration =
        run.cfg.integer_or("solver.descent_steps", opt.descent_steps_per_iteration);
    return opt;
}

void write_trace(Run& run, const std::vector<std::pair<double, double>>& trace) {
    CsvWriter w({"iter", "energy", "residual"});
    for (size_t i = 0; i < trace.size(); ++i)
        w.add_row({csv_field(static_cast<double>(i)), csv_field(trace[i].first),
                   csv_field(trace[i].second)});
    run.write_output("trace.csv", w.str());
}

void write_solution(Run& run, const GridFunction& u) {
    const Domain& dom = u.domain();
    CsvWriter w({"i", "j", "x", "y", "u"});
    for (int j = 0; j < dom.nodes_y(); ++j)
        for (int i = 0; i < dom.nodes_x(); ++i) {
            const auto pos = dom.node_pos(i, j);
            w.add_row({csv_field(static_cast<double>(i)), csv_field(static_cast<double>(j)),
                       csv_field(pos[0]), csv_field(pos[1]), csv_field(u.at(i, j))});
        }
    run.write_output("solution.csv", w.str());
}

int cmd_solve(Run& run) {
    run.cfg.require_known(
        allowed_keys({&kYoungKeys, &kDomainKeys, &kProblemKeys, &kSolverKeys}, {}));
    ProblemSpec P = make_problem(run, true);
    const MountainPassOptions opt = make_solver_options(run);
    const MountainPassResult res = run_mountain_pass(P, opt);

    write_solution(run, res.u_star);
    write_trace(run, res.trace);
    run.status["converged"] = res.converged;
    run.status["nontrivial"] = res.nontrivial;
    run.status["c_level"] = res.c_level;
    run.status["residual"] = res.residual;
    run.status["rho"] = res.rho;
    run.status["alpha"] = res.alpha;
    run.status["string_iterations"] = res.string_iterations;
    std::printf("[solve] lambda = %g  converged = %d  nontrivial = %d  c = %.8g  residual = "
                "%.3e\n",
                P.lambda, res.converged, res.nontrivial, res.c_level, res.residual);
    return run.finish("solve", res.converged ? 0 : 1);
}

int cmd_sweep(Run& run) {
    auto allowed = allowed_keys({&kYoungKeys, &kDomainKeys, &kProblemKeys, &kSolverKeys}, {});
    allowed.erase("problem.lambda");
    allowed.insert("problem.lambdas");
    run.cfg.require_known(allowed);
    ProblemSpec P = make_problem(run, false);
    const std::vector<double> lambdas = run.cfg.numbers("problem.lambdas");
    if (lambdas.empty()) throw ConfigError("problem.lambdas must list at least one value");
    for (size_t i = 1; i < lambdas.size(); ++i)
        if (!(lambdas[i] > lambdas[i - 1]))
            throw ConfigError("problem.lambdas must be strictly increasing");
    const MountainPassOptions opt = make_solver_options(run);

    const std::vector<SweepEntry> entries = lambda_sweep(P, lambdas, opt);
    CsvWriter w({"lambda", "c_lambda", "nontrivial"});
    bool all_converged = true;
    for (const SweepEntry& e : entries) {
        w.add_row({csv_field(e.lambda), csv_field(e.c_level), bool_field(e.nontrivial)});
        all_converged = all_converged && e.converged;
        std::printf("[sweep] lambda = %g  c = %.8g  nontrivial = %d  converged = %d\n",
                    e.lambda, e.c_level, e.nontrivial, e.converged);
    }
    run.write_output("sweep.csv", w.str());
    run.status["entries"] = static_cast<int>(entries.size());
    run.status["all_converged"] = all_converged;
    return run.finish("sweep", all_converged ? 0 : 1);
}

int cmd_verify(Run& run) {
    run.cfg.require_known(allowed_keys({&kYoungKeys}, {"family", "n"}));
    const int n = run.cfg.integer_or("n", 4);
    std::vector<std::pair<YoungFunction, std::string>> members;
    if (run.cfg.text_or("family", "").empty() || run.cfg.text_or("family", "") == "single") {
        const YoungFunction Y = make_young(run);
        members.emplace_back(Y, Y.describe());
    } else if (run.cfg.text("family") == "builtin") {
        members = builtin_family();
    } else {
        throw ConfigError("family must be \"builtin\" or \"single\"");
    }

    CsvWriter w({"function", "check", "passed", "detail"});
    bool all = true;
    for (const auto& [Y, label] : members) {
        const SuiteReport rep = run_inequality_suite(Y, label, n);
        all = all && rep.all_passed();
        for (const CheckResult& c : rep.checks)
            w.add_row({label, c.name, bool_field(c.passed), c.detail});
        std::printf("[verify] %-20s %s\n", label.c_str(),
                    rep.all_passed() ? "all checks passed" : "FAILED");
    }
    run.write_output("verify.csv", w.str());
    run.status["functions"] = static_cast<int>(members.size());
    run.status["n"] = n;
    run.status["all_passed"] = all;
    return run.finish("verify", all ? 0 : 1);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orlicz-space laboratory: Young-function calculus, Sobolev conjugates, "
                 "Luxemburg norms, concentration diagnostics, and a mountain-pass solver"};
    app.require_subcommand(1);
    std::string config_path, out_override;
    double tol_scale = 1.0;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"inspect", "tabulate a Young function and estimate its growth indices"},
        {"conjugate", "tabulate the complementary function and test Young's inequality"},
        {"sobolev", "build the Sobolev conjugate A_n and run its growth checks"},
        {"norm", "Luxemburg norms and modular identities for bump functions"},
        {"ccp", "concentration diagnostics for a synthesized bubble sequence"},
        {"solve", "mountain-pass search for one lambda"},
        {"sweep", "mountain-pass level across a lambda list"},
        {"verify", "inequality suite on one function or the built-in family"}};
    for (const auto& [name, description] : commands) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--out", out_override, "output directory (overrides the config)");
        sub->add_option("--tol-scale", tol_scale, "scale applied to every tolerance");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    if (!(tol_scale > 0.0)) {
        std::fprintf(stderr, "config error: --tol-scale must be positive\n");
        return 2;
    }
    Run run(tol_scale);
    try {
        run.cfg = Config::parse_file(config_path);
        run.config_dir = fs::absolute(fs::path(config_path)).parent_path();
        run.out_dir = !out_override.empty() ? fs::path(out_override)
                                            : fs::path(run.cfg.text_or("out", "orlicz_out"));
        if (command == "inspect") return cmd_inspect(run);
        if (command == "conjugate") return cmd_conjugate(run);
        if (command == "sobolev") return cmd_sobolev(run);
        if (command == "norm") return cmd_norm(run);
        if (command == "ccp") return cmd_ccp(run);
        if (command == "solve") return cmd_solve(run);
        if (command == "sweep") return cmd_sweep(run);
        if (command == "verify") return cmd_verify(run);
        std::fprintf(stderr, "unknown command %s\n", command.c_str());
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const UnsupportedRegimeError& e) {
        std::fprintf(stderr, "config error (unsupported regime): %s\n", e.what());
        return 2;
    } catch (const DegenerateInputError& e) {
        std::fprintf(stderr, "config error (degenerate input): %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        if (!run.out_dir.empty()) {
            run.status["error"] = e.what();
            run.finish(command, 1);
        }
        return 1;
    }
}
