#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "case_io.hpp"
#include "lca/error.hpp"

namespace lca::cli {

namespace {

struct Options {
    std::string input;
    std::string json_path;
    std::string csv_path;
    int grid = 0;
    std::optional<double> s_max;
    std::optional<double> tol;
    std::uint64_t seed = 0;
    std::size_t samples = 100000;
};

struct Context {
    const Options& opt;
    std::ostream& out;
    std::string command;
};

OrderedJson header(const Context& ctx)
{
    return {{"command", ctx.command}, {"tool_version", kToolVersion}};
}

void emit(const Context& ctx, const OrderedJson& report)
{
    const std::string text = dump(report);
    if (ctx.opt.json_path.empty())
        ctx.out << text;
    else
        write_atomically(ctx.opt.json_path, text);
}

void emit_csv(const Context& ctx, const std::string& text)
{
    if (ctx.opt.csv_path.empty())
        ctx.out << text;
    else
        write_atomically(ctx.opt.csv_path, text);
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct PairCase {
    AmbientGroup group;
    AtomicSignedMeasure mu1;
    AtomicSignedMeasure mu2;
    XAutomorphism alpha;
};

PairCase load_pair_case(const Json& j)
{
    AmbientGroup group(parse_group(j.contains("group") ? j.at("group") : Json::object()));
    if (!j.contains("alpha")) throw InvalidInput("missing field \"alpha\"");
    if (!j.contains("mu1") || !j.contains("mu2")) throw InvalidInput("case needs \"mu1\" and \"mu2\"");
    auto alpha = parse_alpha(j.at("alpha"), group);
    return {group, parse_measure(j.at("mu1"), group), parse_measure(j.at("mu2"), group), alpha};
}

GridSpec grid_of(const Options& opt)
{
    GridSpec g;
    if (opt.grid > 0) g.points = opt.grid;
    g.s_max = opt.s_max;
    return g;
}

OrderedJson residual_json(const ResidualReport& r)
{
    return {{"residual", r.residual},
            {"grid", {{"points", r.points}, {"s_max", r.s_max}, {"evaluations", r.evaluations}}},
            {"flags", r.flags}};
}

int cmd_check(const Context& ctx)
{
    const auto c = load_pair_case(load_input(ctx.opt.input));
    const double tol = ctx.opt.tol.value_or(1e-9);
    const auto r = equation_residual(c.mu1, c.mu2, c.alpha, grid_of(ctx.opt));
    auto report = header(ctx);
    const auto body = residual_json(r);
    for (auto it = body.begin(); it != body.end(); ++it) report[it.key()] = it.value();
    report["tol"] = tol;
    const bool pass = r.residual <= tol;
    report["pass"] = pass;
    emit(ctx, report);
    return pass ? kOk : kViolated;
}

int cmd_generate(const Context& ctx)
{
    const Json spec_json = ctx.opt.input.empty() ? Json() : load_input(ctx.opt.input);
    const auto spec = parse_generate_spec(spec_json);
    OrderedJson report = header(ctx);
    report["seed"] = ctx.opt.seed;
    try {
        const auto inst = generate_instance(spec, ctx.opt.seed);
        report["group"] = to_json(inst.alpha.group().finite());
        report["alpha"] = to_json(inst.alpha);
        report["mu1"] = to_json(inst.mu1);
        report["mu2"] = to_json(inst.mu2);
        report["generator"] = {{"theta1", to_json(inst.theta1)},
                               {"theta2", to_json(inst.theta2)},
                               {"omega2", to_json(inst.omega2)},
                               {"vartheta", inst.vartheta},
                               {"x1", to_json(inst.x1)},
                               {"x2", to_json(inst.x2)}};
        emit(ctx, report);
        return kOk;
    } catch (const InfeasibleSpec& e) {
        report["feasible"] = false;
        report["violations"] = e.violations();
        emit(ctx, report);
        return kViolated;
    }
}

OrderedJson side_json(const SideDecomposition& s)
{
    OrderedJson j;
    j["observed"] = s.observed ? to_json(*s.observed) : OrderedJson();
    j["gamma"] = s.gamma ? to_json(*s.gamma) : OrderedJson();
    j["rho"] = s.rho ? OrderedJson(*s.rho) : OrderedJson();
    j["pi_c"] = s.pi_c ? OrderedJson(*s.pi_c) : OrderedJson();
    j["tau"] = to_json(s.tau);
    j["omega"] = to_json(s.omega);
    j["shift"] = to_json(s.shift);
    j["support_in_K"] = s.support_in_k;
    j["reconstruction_error"] = s.reconstruction_error;
    return j;
}

int cmd_decompose(const Context& ctx)
{
    const auto c = load_pair_case(load_input(ctx.opt.input));
    DecomposeOptions options;
    options.tol = ctx.opt.tol.value_or(options.tol);
    options.grid = grid_of(ctx.opt);
    auto report = header(ctx);
    try {
        const auto d = decompose(c.mu1, c.mu2, c.alpha, options);
        report["status"] = "decomposed";
        report["branch"] = to_string(d.branch);
        report["equation_residual"] = d.equation_residual;
        OrderedJson kernel = OrderedJson::array();
        for (const auto& k : d.kernel) kernel.push_back(k.coords);
        report["K"] = kernel;
        report["mu1"] = side_json(d.sides[0]);
        report["mu2"] = side_json(d.sides[1]);
        OrderedJson candidates = OrderedJson::array();
        for (const auto& [side, cval] : d.vartheta.candidates) candidates.push_back({{"side", side}, {"c", cval}});
        report["vartheta"] = {{"relation", d.vartheta.side == 2 ? "omega1 = omega2 * vartheta2" : "omega2 = omega1 * vartheta1"},
                              {"c", d.vartheta.c},
                              {"tie", d.vartheta.tie},
                              {"residual", d.vartheta.residual},
                              {"candidates", candidates}};
        if (d.cross)
            report["cross_constraints"] = {{"sigma", d.cross->sigma},
                                           {"sigma_p", d.cross->sigma_p},
                                           {"m", d.cross->m},
                                           {"m_p", d.cross->m_p}};
        report["notes"] = d.notes;
        emit(ctx, report);
        return kOk;
    } catch (const HypothesisViolation& e) {
        report["status"] = "hypothesis_violated";
        report["diagnostic"] = e.what();
        emit(ctx, report);
        return kViolated;
    }
}

int cmd_theta(const Context& ctx)
{
    const auto p = parse_theta(load_input(ctx.opt.input));
    const auto m = theta_membership(p);
    auto report = header(ctx);
    report["params"] = to_json(p);
    report["in_theta"] = m.in();
    report["verdict"] = m.verdict == ThetaVerdict::In ? "in" : (m.verdict == ThetaVerdict::Out ? "out" : "boundary");
    report["kappa_bound"] = m.bound;
    report["reason"] = m.reason;
    const auto dist = is_distribution(theta_to_measure(p));
    report["density_check"] = dist.verdict == Verdict::Yes ? "yes" : (dist.verdict == Verdict::No ? "no" : "boundary");
    emit(ctx, report);
    return m.in() ? kOk : kViolated;
}

int cmd_rigidity(const Context& ctx)
{
    const Json j = load_input(ctx.opt.input);
    AmbientGroup group(parse_group(j.contains("group") ? j.at("group") : Json::object()));
    if (!j.contains("gamma") || !j.contains("omega")) throw InvalidInput("rigidity case needs \"gamma\" and \"omega\"");
    const auto gamma = parse_theta(j.at("gamma"));
    const auto weights = parse_weights(j.at("omega"), group);
    const auto r = rigidity_decision(gamma, group, weights);
    auto report = header(ctx);
    report["decision"] = r.rigid ? "rigid" : "flexible";
    report["reason"] = r.reason;
    if (r.witness) {
        report["witness"] = {{"c", r.witness->c()}};
        report["gamma_prime"] = to_json(r.exchanged->gamma);
        report["omega_prime"] = to_json(r.exchanged->omega);
        report["witness_valid"] = r.witness_valid;
    }
    report["notes"] = r.notes;
    emit(ctx, report);
    return kOk;
}

int cmd_simulate(const Context& ctx)
{
    const auto c = load_pair_case(load_input(ctx.opt.input));
    std::ostringstream csv;
    const bool want_csv = !ctx.opt.csv_path.empty();
    const std::size_t rank = c.group.finite().rank();
    if (want_csv) {
        csv << "t1,m1";
        for (std::size_t k = 0; k < rank; ++k) csv << ",g1_" << k;
        csv << ",t2,m2";
        for (std::size_t k = 0; k < rank; ++k) csv << ",g2_" << k;
        csv << "\n";
    }
    auto writer = [&](const XPoint& x1, const XPoint& x2) {
        csv << fmt(x1.t) << "," << x1.m;
        for (auto g : x1.g.coords) csv << "," << g;
        csv << "," << fmt(x2.t) << "," << x2.m;
        for (auto g : x2.g.coords) csv << "," << g;
        csv << "\n";
    };
    const auto probes = default_probes(c.mu1, c.mu2, c.alpha);
    const auto mc = want_csv ? mc_symmetry_test(c.mu1, c.mu2, c.alpha, ctx.opt.samples, probes, ctx.opt.seed, writer)
                             : mc_symmetry_test(c.mu1, c.mu2, c.alpha, ctx.opt.samples, probes, ctx.opt.seed);
    auto report = header(ctx);
    report["seed"] = ctx.opt.seed;
    report["mc"] = {{"statistic", mc.statistic},
                    {"threshold", mc.threshold},
                    {"pass", mc.pass},
                    {"samples", mc.samples},
                    {"probes", mc.probes}};
    if (want_csv) write_atomically(ctx.opt.csv_path, csv.str());
    emit(ctx, report);
    return mc.pass ? kOk : kViolated;
}

int cmd_density_dump(const Context& ctx)
{
    const Json j = load_input(ctx.opt.input);
    AmbientGroup group(parse_group(j.contains("group") ? j.at("group") : Json::object()));
    const Json& mj = j.contains("mu") ? j.at("mu") : (j.contains("mu1") ? j.at("mu1") : j);
    const auto mu = parse_measure(mj, group);
    const int points = ctx.opt.grid > 0 ? ctx.opt.grid : 401;
    if (points < 2) throw InvalidInput("density dump needs at least two grid points");

    double lo = 0.0;
    double hi = 0.0;
    bool any = false;
    for (const auto& t : mu.terms()) {
        lo = any ? std::min(lo, t.atom.shift) : t.atom.shift;
        hi = any ? std::max(hi, t.atom.shift) : t.atom.shift;
        any = true;
    }
    const double pad = ctx.opt.s_max.value_or(10.0 * std::sqrt(std::max(mu.max_sigma(), 0.01)));
    lo -= pad;
    hi += pad;

    std::ostringstream csv;
    const std::size_t rank = group.finite().rank();
    csv << "m";
    for (std::size_t k = 0; k < rank; ++k) csv << ",g" << k;
    csv << ",t,density\n";
    std::vector<std::pair<int, GroupElement>> cosets;
    for (const auto& t : mu.terms())
        if (std::find(cosets.begin(), cosets.end(), std::make_pair(t.m, t.g)) == cosets.end()) cosets.emplace_back(t.m, t.g);
    OrderedJson atoms = OrderedJson::array();
    for (const auto& [m, g] : cosets) {
        for (int i = 0; i < points; ++i) {
            const double t = lo + (hi - lo) * i / (points - 1);
            const auto prof = density_profile(mu, m, g, t);
            csv << m;
            for (auto x : g.coords) csv << "," << x;
            csv << "," << fmt(t) << "," << fmt(prof.density) << "\n";
        }
        for (const auto& [t, c] : density_profile(mu, m, g, lo).point_masses)
            atoms.push_back({{"m", m}, {"g", g.coords}, {"t", t}, {"mass", c}});
    }
    if (ctx.opt.csv_path.empty()) {
        emit_csv(ctx, csv.str());
        return kOk;
    }
    emit_csv(ctx, csv.str());
    auto report = header(ctx);
    report["csv"] = ctx.opt.csv_path;
    report["points_per_coset"] = points;
    report["t_range"] = {lo, hi};
    report["point_masses"] = atoms;
    emit(ctx, report);
    return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Heyde-type characterization toolkit on R x Z(2) x G", "lcachar"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub, bool input_required) {
        auto* in = sub->add_option("input", opt.input, "case file, '-' for stdin, or inline JSON");
        if (input_required) in->required();
        sub->add_option("--json", opt.json_path, "write the JSON report to this path");
    };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--grid", opt.grid, "number of grid points")->check(CLI::PositiveNumber);
        sub->add_option("--smax", opt.s_max, "grid half-width");
    };

    auto* check = app.add_subcommand("check", "evaluate the symmetry equation residual on a grid");
    add_common(check, true);
    add_grid(check);
    check->add_option("--tol", opt.tol, "pass threshold for the residual");

    auto* generate = app.add_subcommand("generate", "build a case that satisfies the symmetry condition");
    add_common(generate, false);
    generate->add_option("--seed", opt.seed, "random seed");

    auto* decomp = app.add_subcommand("decompose", "recover gamma_j, omega_j, shifts and vartheta");
    add_common(decomp, true);
    add_grid(decomp);
    decomp->add_option("--tol", opt.tol, "tolerance for the residual and the reconstruction");

    auto* theta = app.add_subcommand("theta", "decide membership in Theta");
    add_common(theta, true);

    auto* rigidity = app.add_subcommand("rigidity", "decide uniqueness of a gamma * omega factorization");
    add_common(rigidity, true);

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo symmetry test");
    add_common(simulate, true);
    simulate->add_option("--samples", opt.samples, "number of draws")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", opt.seed, "random seed");
    simulate->add_option("--csv", opt.csv_path, "write the draws as CSV");

    auto* density = app.add_subcommand("density-dump", "tabulate coset densities as CSV");
    add_common(density, true);
    add_grid(density);
    density->add_option("--csv", opt.csv_path, "write the CSV to this path");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "lcachar: " << e.what() << "\n";
        return kInvalidInput;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const Context ctx{opt, out, chosen->get_name()};
    try {
        if (chosen == check) return cmd_check(ctx);
        if (chosen == generate) return cmd_generate(ctx);
        if (chosen == decomp) return cmd_decompose(ctx);
        if (chosen == theta) return cmd_theta(ctx);
        if (chosen == rigidity) return cmd_rigidity(ctx);
        if (chosen == simulate) return cmd_simulate(ctx);
        return cmd_density_dump(ctx);
    } catch (const InvalidInput& e) {
        err << "lcachar: invalid input: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const Json::exception& e) {
        err << "lcachar: invalid input: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const HypothesisViolation& e) {
        err << "lcachar: " << e.what() << "\n";
        return kViolated;
    }
}

}  // namespace lca::cli
