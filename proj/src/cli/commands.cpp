#include "ordersens/cli.hpp"

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ordersens/causal/estimation.hpp"
#include "ordersens/causal/event_log.hpp"
#include "ordersens/causal/model.hpp"
#include "ordersens/causal/random.hpp"
#include "ordersens/csv.hpp"
#include "ordersens/error.hpp"
#include "ordersens/field_io.hpp"
#include "ordersens/integrability.hpp"
#include "ordersens/planner.hpp"
#include "ordersens/policy.hpp"

#ifndef ORDERSENS_VERSION
#define ORDERSENS_VERSION "unknown"
#endif

namespace ordersens::cli {

namespace {

using json = nlohmann::json;
using causal::Estimate;
using causal::FamilySpec;

constexpr std::uint64_t kDefaultSeed = 20250101;

struct Caps {
    std::size_t nodes = 1'000'000;
    std::size_t paths = 1'000'000;
    std::size_t width = 10;
};

Caps parse_caps(const std::string& text) {
    Caps c;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("--caps expects key=value pairs, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const double v = csv::parse_number(item.substr(eq + 1));
        if (!(v >= 1.0)) throw InputError("--caps values must be positive");
        const auto n = static_cast<std::size_t>(v);
        if (key == "nodes") c.nodes = n;
        else if (key == "paths") c.paths = n;
        else if (key == "width") c.width = n;
        else throw InputError("unknown cap '" + key + "' (nodes, paths, width)");
    }
    return c;
}

/// Options shared by every subcommand.
struct Common {
    std::string out_dir = "ordersens-out";
    std::uint64_t seed = kDefaultSeed;
    double tol = kDefaultTolerance;
    std::string caps = "nodes=1000000,paths=1000000,width=10";
};

struct SliceArgs {
    std::string poset;
    std::string base = "-";
    int depth = 3;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--out", c.out_dir, "output directory")->capture_default_str();
    app->add_option("--seed", c.seed, "random seed")->capture_default_str();
    app->add_option("--tol", c.tol, "numerical tolerance")->capture_default_str();
    app->add_option("--caps", c.caps, "resource caps: nodes=N,paths=N,width=N")->capture_default_str();
}

void add_slice(CLI::App* app, SliceArgs& s, bool required) {
    auto* p = app->add_option("--poset", s.poset, "poset file");
    if (required) p->required();
    app->add_option("--base", s.base, "base ideal (ids joined by '+', '-' for empty)")->capture_default_str();
    app->add_option("--depth", s.depth, "horizon H")->capture_default_str()->check(CLI::NonNegativeNumber);
}

json common_json(const Common& c) {
    return {{"out", c.out_dir}, {"seed", c.seed}, {"tol", c.tol}, {"caps", c.caps}};
}

json slice_json(const SliceArgs& s) { return {{"poset", s.poset}, {"base", s.base}, {"depth", s.depth}}; }

SlicePtr load_slice(const SliceArgs& s, const Caps& caps) {
    Poset p = load_poset(s.poset);
    const Ideal base = p.parse_set(s.base);
    if (!p.is_ideal(base)) throw PreconditionError("base '" + s.base + "' is not an ideal");
    return build_lattice(p, base, s.depth, LatticeOptions{caps.nodes});
}

std::filesystem::path prepare_out(const Common& c) {
    std::filesystem::path dir(c.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory '" + c.out_dir + "': " + ec.message());
    return dir;
}

void write_report(const std::filesystem::path& dir, const std::string& command, const Common& c,
                  json config, json results) {
    json report;
    report["command"] = command;
    report["version"] = ORDERSENS_VERSION;
    report["seed"] = c.seed;
    config["common"] = common_json(c);
    report["config"] = std::move(config);
    report["results"] = std::move(results);
    csv::write_file((dir / "report.json").string(), report.dump(2) + "\n");
}

json estimate_json(const Estimate& e) {
    if (e.ok()) return e.value;
    return causal::to_string(e.status);
}

std::string estimate_csv(const Estimate& e) {
    return e.ok() ? csv::format_number(e.value) : causal::to_string(e.status);
}

std::string format_path(const Poset& p, const Path& path) {
    if (path.additions.empty()) return "stop";
    std::string s;
    for (Element a : path.additions) s += (s.empty() ? "" : "->") + p.id(a);
    return s;
}

json diamond_json(const Poset& p, const Diamond& d) {
    return {{"base", p.format(d.base)}, {"u", p.id(d.u)}, {"v", p.id(d.v)}};
}

json cube_json(const Poset& p, const ThreeCube& c) {
    return {{"base", p.format(c.base)}, {"u", p.id(c.u)}, {"v", p.id(c.v)}, {"w", p.id(c.w)}};
}

std::string describe(const Poset& p, const ThreeCube& c) {
    return "(" + p.format(c.base) + "; " + p.id(c.u) + ", " + p.id(c.v) + ", " + p.id(c.w) + ")";
}

// --- lattice -------------------------------------------------------------

struct LatticeArgs {
    Common common;
    SliceArgs slice;
    std::string field;
};

int cmd_lattice(const LatticeArgs& a, std::ostream& out) {
    const Caps caps = parse_caps(a.common.caps);
    const auto slice = load_slice(a.slice, caps);
    const auto& p = slice->poset();
    const auto dir = prepare_out(a.common);

    std::string nodes = "node,ideal,depth\n";
    for (NodeId k = 0; k < slice->node_count(); ++k)
        nodes += csv::join({std::to_string(k), p.format(slice->node(k)), std::to_string(slice->node_depth(k))}) +
                 "\n";
    std::string edges = "edge,ideal,add,to\n";
    for (EdgeId e = 0; e < slice->edge_count(); ++e) {
        const auto& ed = slice->edge(e);
        edges += csv::join({std::to_string(e), p.format(slice->node(ed.from)), p.id(ed.add),
                            p.format(slice->node(ed.to))}) +
                 "\n";
    }
    csv::write_file((dir / "nodes.csv").string(), nodes);
    csv::write_file((dir / "edges.csv").string(), edges);

    if (!a.field.empty()) {
        causal::Rng rng(a.common.seed);
        EdgeField g(slice);
        if (a.field == "random") {
            for (EdgeId e = 0; e < slice->edge_count(); ++e) g[e] = static_cast<double>(rng.index(11)) - 5.0;
        } else if (a.field == "gradient") {
            Potential phi(slice);
            for (NodeId k = 1; k < slice->node_count(); ++k) phi[k] = static_cast<double>(rng.index(11)) - 5.0;
            g = gradient(phi);
        } else if (a.field != "zero") {
            throw InputError("--field must be zero, random or gradient");
        }
        csv::write_file((dir / "field.csv").string(), write_edge_field(g));
    }

    const auto diamonds = enumerate_diamonds(*slice);
    const auto cubes = enumerate_cubes(*slice);
    json results = {{"nodes", slice->node_count()},
                    {"edges", slice->edge_count()},
                    {"diamonds", diamonds.size()},
                    {"cubes", cubes.size()},
                    {"full_interval", slice->is_full_interval()},
                    {"top", p.format(slice->top())}};
    json config = {{"slice", slice_json(a.slice)}, {"field", a.field}};
    write_report(dir, "lattice", a.common, std::move(config), results);
    out << "nodes " << slice->node_count() << "\nedges " << slice->edge_count() << "\ndiamonds " << diamonds.size()
        << "\ncubes " << cubes.size() << "\n";
    return kOk;
}

// --- check ---------------------------------------------------------------

struct CheckArgs {
    Common common;
    SliceArgs slice;
    std::string field;
    std::string kappa;
};

int cmd_check(const CheckArgs& a, std::ostream& out) {
    if (a.field.empty() == a.kappa.empty()) throw InputError("check needs exactly one of --field or --kappa");
    const Caps caps = parse_caps(a.common.caps);
    const auto slice = load_slice(a.slice, caps);
    const auto& p = slice->poset();
    const auto dir = prepare_out(a.common);
    json results;

    DiamondField kappa;
    if (!a.field.empty()) {
        const EdgeField g = read_edge_field(slice, csv::read_file(a.field));
        const auto pi = check_path_independence(g, a.common.tol);
        results["path_independent"] = pi.independent;
        if (pi.witness) {
            results["witness_diamond"] = diamond_json(p, *pi.witness);
            results["witness_diamond"]["kappa"] = pi.curvature;
            out << "path-independence: witness diamond (" << p.format(pi.witness->base) << "; "
                << p.id(pi.witness->u) << ", " << p.id(pi.witness->v) << ") kappa=" << csv::format_number(pi.curvature)
                << "\n";
        } else {
            out << "path-independence: independent\n";
            const Potential phi = endpoint_potential(g, a.common.tol);
            csv::write_file((dir / "potential.csv").string(), write_potential(phi));
            if (slice->is_full_interval())
                csv::write_file((dir / "theta.csv").string(), write_theta(mobius_invert(phi)));
        }
        kappa = curvature_field(g);
        csv::write_file((dir / "kappa.csv").string(), write_diamond_field(kappa));
        const auto tree = reference_tree(slice);
        csv::write_file((dir / "alpha.csv").string(), write_gauge(gauge_of(g, tree)));
    } else {
        kappa = read_diamond_field(slice, csv::read_file(a.kappa));
    }

    const auto cc = is_cube_consistent(kappa, a.common.tol);
    double max_defect = 0.0;
    for (const auto& c : enumerate_cubes(*slice)) max_defect = std::max(max_defect, std::abs(cube_defect(kappa, c)));
    results["cube_consistent"] = cc.consistent;
    results["max_cube_defect"] = max_defect;
    results["cubes"] = enumerate_cubes(*slice).size();
    if (cc.witness) {
        results["witness_cube"] = cube_json(p, *cc.witness);
        results["witness_cube"]["defect"] = cc.defect;
        out << "cube-consistency: witness cube " << describe(p, *cc.witness)
            << " defect=" << csv::format_number(cc.defect) << "\n";
    } else {
        out << "cube-consistency: consistent (max defect " << csv::format_number(max_defect) << ")\n";
    }
    json config = {{"slice", slice_json(a.slice)}, {"field", a.field}, {"kappa", a.kappa}};
    write_report(dir, "check", a.common, std::move(config), results);
    return kOk;
}

// --- reconstruct ---------------------------------------------------------

struct ReconstructArgs {
    Common common;
    SliceArgs slice;
    std::string kappa;
    std::string alpha;
};

int cmd_reconstruct(const ReconstructArgs& a, std::ostream& out, std::ostream& err) {
    const Caps caps = parse_caps(a.common.caps);
    const auto slice = load_slice(a.slice, caps);
    const auto kappa = read_diamond_field(slice, csv::read_file(a.kappa));
    const auto alpha = read_gauge(slice, csv::read_file(a.alpha));
    const auto dir = prepare_out(a.common);
    EdgeField g;
    try {
        g = reconstruct_with_gauge(kappa, alpha, a.common.tol);
    } catch (const CubeInconsistency& e) {
        err << "witness cube " << describe(slice->poset(), e.cube()) << " defect=" << csv::format_number(e.defect())
            << "\n";
        throw;
    }
    csv::write_file((dir / "field.csv").string(), write_edge_field(g));
    json config = {{"slice", slice_json(a.slice)}, {"kappa", a.kappa}, {"alpha", a.alpha}};
    write_report(dir, "reconstruct", a.common, std::move(config), {{"edges", slice->edge_count()}});
    out << "reconstructed " << slice->edge_count() << " edge values\n";
    return kOk;
}

// --- log based commands --------------------------------------------------

struct LogArgs {
    std::string log;
    std::vector<std::string> families;
    std::size_t min_two_sided = 1;
    double lambda = causal::kDefaultLambda;
    std::string accept_activity;
};

void add_log(CLI::App* app, LogArgs& l) {
    app->add_option("--log", l.log, "event-log CSV")->required();
    app->add_option("--family", l.families, "family u,w,v (repeatable); default: detect")->take_all();
    app->add_option("--min-two-sided", l.min_two_sided, "detection threshold per order")->capture_default_str();
    app->add_option("--lambda", l.lambda, "duration penalty per day")->capture_default_str();
    app->add_option("--accept-activity", l.accept_activity, "activity marking acceptance when outcome is empty");
}

json log_json(const LogArgs& l) {
    return {{"log", l.log},
            {"family", l.families},
            {"min_two_sided", l.min_two_sided},
            {"lambda", l.lambda},
            {"accept_activity", l.accept_activity}};
}

causal::EventLog load_log(const LogArgs& l) {
    causal::IngestOptions o;
    if (!l.accept_activity.empty()) o.accept_activity = l.accept_activity;
    return causal::ingest_log(csv::read_file(l.log), o);
}

std::vector<FamilySpec> resolve_families(const causal::EventLog& log, const LogArgs& l, double lambda) {
    if (l.families.empty()) return causal::detect_families(log, l.min_two_sided, lambda);
    std::vector<FamilySpec> out;
    for (const auto& f : l.families) {
        std::vector<std::string> parts;
        std::stringstream ss(f);
        std::string item;
        while (std::getline(ss, item, ',')) parts.push_back(item);
        if (parts.size() != 3) throw InputError("--family expects u,w,v, got '" + f + "'");
        out.push_back(FamilySpec::make(parts[0], parts[1], parts[2], lambda));
    }
    return out;
}

std::string family_id(std::size_t k) { return "F" + std::to_string(k + 1); }

json cell_json(const causal::Cell& c) { return {{"n", c.count}, {"mean", estimate_json(c.mean)}}; }

struct EstimateArgs {
    Common common;
    LogArgs log;
    std::size_t resamples = 1000;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
    const auto log = load_log(a.log);
    const auto families = resolve_families(log, a.log, a.log.lambda);
    const auto dir = prepare_out(a.common);
    causal::BootstrapOptions boot;
    boot.resamples = a.resamples;
    boot.seed = a.common.seed;

    std::string table = "ID,target,pair,n_empty,n_u,n_w,n_uw,n_u_first,n_w_first,kappa,ci_low,ci_high\n";
    json fams = json::array();
    for (std::size_t k = 0; k < families.size(); ++k) {
        const auto& f = families[k];
        const auto episodes = causal::extract_episodes(log, f);
        const auto r = causal::estimate_family(episodes, f, boot);
        const auto s = causal::support_separation_report(episodes);
        const auto& e = r.endpoints;
        table += csv::join({family_id(k), f.v, "(" + f.u + ";" + f.w + ")", std::to_string(e[0].count),
                            std::to_string(e[1].count), std::to_string(e[2].count), std::to_string(e[3].count),
                            std::to_string(r.u_first.count), std::to_string(r.w_first.count),
                            estimate_csv(r.kappa), estimate_csv(r.ci_low), estimate_csv(r.ci_high)}) +
                 "\n";
        json j;
        j["id"] = family_id(k);
        j["u"] = f.u;
        j["w"] = f.w;
        j["v"] = f.v;
        j["episodes"] = episodes.size();
        j["endpoints"] = {{"empty", cell_json(e[0])}, {"u", cell_json(e[1])}, {"w", cell_json(e[2])},
                          {"uw", cell_json(e[3])}};
        j["orders"] = {{"u->w", cell_json(r.u_first)}, {"w->u", cell_json(r.w_first)}};
        j["kappa"] = estimate_json(r.kappa);
        j["ci"] = {estimate_json(r.ci_low), estimate_json(r.ci_high)};
        j["support"] = {{"reference_supported", r.reference_supported},
                        {"two_sided_supported", r.two_sided_supported},
                        {"endpoint_identified", s.endpoint_identified},
                        {"reference_identified", s.reference_identified},
                        {"kappa_identified", s.kappa_identified},
                        {"path_identified", s.path_identified}};
        fams.push_back(std::move(j));
        out << family_id(k) << " (" << f.u << "," << f.w << ")->" << f.v << ": kappa " << estimate_csv(r.kappa)
            << " [" << estimate_csv(r.ci_low) << ", " << estimate_csv(r.ci_high) << "]\n";
    }
    csv::write_file((dir / "families.csv").string(), table);

    json results;
    results["cases"] = log.cases.size();
    results["families"] = std::move(fams);
    results["warnings"] = log.warnings;
    results["method"] = {{"pooling", "marginal over contexts"},
                         {"orientation", "kappa = mean(w->u) - mean(u->w), u the smaller activity name"},
                         {"ci", "stratified percentile bootstrap, widened to contain kappa"},
                         {"resamples", boot.resamples},
                         {"level", boot.level},
                         {"bootstrap_seed", boot.seed}};
    json config = {{"log", log_json(a.log)}, {"resamples", a.resamples}};
    write_report(dir, "estimate", a.common, std::move(config), std::move(results));
    if (families.empty()) out << "no families\n";
    return kOk;
}

// --- plan ----------------------------------------------------------------

struct PlanArgs {
    Common common;
    SliceArgs slice;
    std::string field;
    LogArgs log;
    std::vector<double> lambdas = {0.0, 0.01, 0.02, 0.05};
    bool no_stop = false;
};

std::string family_plan_path(const FamilySpec& f, const Path& path) {
    if (path.additions.empty()) return "stop";
    const std::vector<std::string> ids = {f.u, f.w};
    std::string s;
    for (Element a : path.additions) s += (s.empty() ? "" : "->") + ids[a];
    return s;
}

int cmd_plan(const PlanArgs& a, std::ostream& out) {
    const Caps caps = parse_caps(a.common.caps);
    PlanOptions po;
    po.allow_stop = !a.no_stop;
    po.path_cap = caps.paths;
    const auto dir = prepare_out(a.common);
    const std::string header = "ID,DP argmax,exhaustive argmax,equal,best value\n";
    json results;
    json config = {{"no_stop", a.no_stop}};

    if (!a.field.empty()) {
        if (a.slice.poset.empty()) throw InputError("--field needs --poset");
        const auto slice = load_slice(a.slice, caps);
        const auto& p = slice->poset();
        const EdgeField g = read_edge_field(slice, csv::read_file(a.field));
        const auto dp = dp_plan(g, po);
        const auto ex = exhaustive_plan(g, po);
        const bool equal = dp.best_path == ex.best_path && dp.best_value == ex.best_value;
        csv::write_file((dir / "plan.csv").string(),
                        header + csv::join({"field", format_path(p, dp.best_path), format_path(p, ex.best_path),
                                            equal ? "true" : "false", csv::format_number(dp.best_value)}) +
                            "\n");
        std::string values = "ideal,value\n";
        for (NodeId k = 0; k < slice->node_count(); ++k)
            values += csv::join({p.format(slice->node(k)), csv::format_number(dp.value_table[k])}) + "\n";
        csv::write_file((dir / "values.csv").string(), values);
        results = {{"dp_path", format_path(p, dp.best_path)},
                   {"exhaustive_path", format_path(p, ex.best_path)},
                   {"best_value", dp.best_value},
                   {"exhaustive_value", ex.best_value},
                   {"equal", equal}};
        config["slice"] = slice_json(a.slice);
        config["field"] = a.field;
        write_report(dir, "plan", a.common, std::move(config), std::move(results));
        out << "best path " << format_path(p, dp.best_path) << " value " << csv::format_number(dp.best_value)
            << " equal=" << (equal ? "true" : "false") << "\n";
        return kOk;
    }

    if (a.log.log.empty()) throw InputError("plan needs --field or --log");
    const auto log = load_log(a.log);
    const auto families = resolve_families(log, a.log, a.log.lambda);
    auto plan_row = [&](const FamilySpec& f, const std::string& id) {
        const auto episodes = causal::extract_episodes(log, f);
        return std::pair{id, plan_family(fit_family_values(episodes), f, po)};
    };
    auto row_csv = [&](const std::string& id, const FamilyPlanRow& r, std::vector<std::string> extra) {
        std::vector<std::string> cells = {id};
        cells.insert(cells.end(), extra.begin(), extra.end());
        if (!r.plannable) {
            cells.insert(cells.end(), {"unidentified", "unidentified", "false", "unidentified"});
        } else {
            cells.insert(cells.end(), {family_plan_path(r.family, r.dp_path),
                                       family_plan_path(r.family, r.exhaustive_path), r.equal ? "true" : "false",
                                       csv::format_number(r.dp_value)});
        }
        return csv::join(cells) + "\n";
    };

    std::string table = header;
    json rows = json::array();
    for (std::size_t k = 0; k < families.size(); ++k) {
        const auto [id, r] = plan_row(families[k], family_id(k));
        table += row_csv(id, r, {});
        json j = {{"id", id}, {"u", r.family.u}, {"w", r.family.w}, {"v", r.family.v}, {"plannable", r.plannable}};
        if (r.plannable) {
            j["dp_path"] = family_plan_path(r.family, r.dp_path);
            j["exhaustive_path"] = family_plan_path(r.family, r.exhaustive_path);
            j["best_value"] = r.dp_value;
            j["equal"] = r.equal;
        }
        rows.push_back(std::move(j));
        out << id << ": " << (r.plannable ? family_plan_path(r.family, r.dp_path) : "unidentified") << "\n";
    }
    csv::write_file((dir / "plan.csv").string(), table);

    std::string sweep = "ID,lambda,DP argmax,exhaustive argmax,equal,best value\n";
    for (std::size_t k = 0; k < families.size(); ++k) {
        for (double lambda : a.lambdas) {
            FamilySpec f = families[k];
            f.lambda = lambda;
            const auto [id, r] = plan_row(f, family_id(k));
            sweep += row_csv(id, r, {csv::format_number(lambda)});
        }
    }
    csv::write_file((dir / "lambda_sweep.csv").string(), sweep);
    results["families"] = std::move(rows);
    config["log"] = log_json(a.log);
    config["lambdas"] = a.lambdas;
    write_report(dir, "plan", a.common, std::move(config), std::move(results));
    return kOk;
}

// --- policy --------------------------------------------------------------

struct PolicyArgs {
    Common common;
    LogArgs log;
    bool allow_stop = false;
    std::size_t resplits = 30;
};

int cmd_policy(const PolicyArgs& a, std::ostream& out) {
    const auto log = load_log(a.log);
    const auto families = resolve_families(log, a.log, a.log.lambda);
    const auto dir = prepare_out(a.common);
    PolicyOptions po;
    po.allow_stop = a.allow_stop;
    po.resplits = a.resplits;
    po.seed = a.common.seed;
    po.kappa_tol = a.common.tol;

    std::string table = "ID,selected path,held-out value,delta_ref,delta_greedy,win rate\n";
    std::string all = "ID,policy,selected path,held-out value,delta_ref,delta_greedy,win rate\n";
    json fams = json::array();
    for (std::size_t k = 0; k < families.size(); ++k) {
        const auto& f = families[k];
        const auto episodes = causal::extract_episodes(log, f);
        const auto t = policy_compare_resplit(episodes, f, po);
        json rows = json::array();
        for (const auto& r : t.rows) {
            std::string label = r.selected ? family_path_label(*r.selected, f) : "none";
            if (r.pooled_endpoint && r.selected == FamilyPath::u_then_w) label = "{" + f.u + "," + f.w + "}";
            const std::vector<std::string> cells = {estimate_csv(r.heldout), estimate_csv(r.delta_ref),
                                                    estimate_csv(r.delta_greedy), estimate_csv(r.win_rate)};
            std::vector<std::string> line = {family_id(k), r.name, label};
            line.insert(line.end(), cells.begin(), cells.end());
            all += csv::join(line) + "\n";
            if (r.name == kPolicyNames[0]) {
                std::vector<std::string> main = {family_id(k), label};
                main.insert(main.end(), cells.begin(), cells.end());
                table += csv::join(main) + "\n";
                out << family_id(k) << ": " << label << " held-out " << cells[0] << " delta_ref " << cells[1]
                    << "\n";
            }
            rows.push_back({{"policy", r.name},
                            {"selected", label},
                            {"heldout", estimate_json(r.heldout)},
                            {"delta_ref", estimate_json(r.delta_ref)},
                            {"delta_greedy", estimate_json(r.delta_greedy)},
                            {"win_rate", estimate_json(r.win_rate)}});
        }
        fams.push_back({{"id", family_id(k)},
                        {"u", f.u},
                        {"w", f.w},
                        {"v", f.v},
                        {"train", t.train_size},
                        {"heldout", t.heldout_size},
                        {"policies", std::move(rows)}});
    }
    csv::write_file((dir / "policy.csv").string(), table);
    csv::write_file((dir / "policies.csv").string(), all);
    json results = {{"families", std::move(fams)},
                    {"protocol",
                     {{"split", "seeded 70/30 by case"},
                      {"resplits", a.resplits},
                      {"win_rate", "fraction of resplits where the policy's held-out value exceeds reference-path"}}}};
    json config = {{"log", log_json(a.log)}, {"allow_stop", a.allow_stop}, {"resplits", a.resplits}};
    write_report(dir, "policy", a.common, std::move(config), std::move(results));
    return kOk;
}

// --- simulate ------------------------------------------------------------

struct SimulateArgs {
    Common common;
    SliceArgs slice;
    std::string preset = "family";
    std::size_t n = 1000;
    double effect = 2.0;
    double lambda = causal::kDefaultLambda;
    std::size_t contexts = 2;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    const Caps caps = parse_caps(a.common.caps);
    causal::CausalModel m;
    json truth;
    if (a.preset == "family") {
        causal::FamilyModelSpec spec;
        spec.kappa = a.effect;
        spec.lambda = a.lambda;
        m = causal::make_family_model(spec);
        const Diamond d{Ideal{}, 0, 1};
        truth["kappa"] = causal::pooled_order_effect(m, d);
        truth["family"] = {spec.u, spec.w, spec.target};
    } else if (a.preset == "random") {
        if (a.slice.poset.empty()) throw InputError("--preset random needs --poset");
        causal::RandomModelOptions o;
        o.contexts = a.contexts;
        m = causal::make_random_model(load_slice(a.slice, caps), a.common.seed, o);
    } else {
        throw InputError("--preset must be family or random");
    }
    const auto& l = *m.slice;
    json values = json::object();
    for (NodeId k = 0; k < l.node_count(); ++k)
        for (const auto& path : enumerate_paths(l, l.base(), l.node(k), PathEnumOptions{caps.width}))
            values[format_path(l.poset(), path)] = causal::pooled_path_value(m, path);
    truth["pooled_path_values"] = std::move(values);
    truth["lambda"] = m.lambda;

    const auto dir = prepare_out(a.common);
    const auto log = causal::simulate_log(m, a.n, a.common.seed);
    csv::write_file((dir / "log.csv").string(), causal::write_log(log));
    json config = {{"preset", a.preset}, {"n", a.n}, {"effect", a.effect}, {"lambda", a.lambda},
                   {"contexts", a.contexts}};
    if (a.preset == "random") config["slice"] = slice_json(a.slice);
    write_report(dir, "simulate", a.common, std::move(config), {{"truth", truth}, {"cases", log.cases.size()}});
    out << "simulated " << log.cases.size() << " cases\n";
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Order-sensitive sequential intervention toolkit"};
    app.set_version_flag("--version", std::string(ORDERSENS_VERSION));
    app.require_subcommand(1);

    LatticeArgs lattice;
    auto* s_lattice = app.add_subcommand("lattice", "build a truncated ideal lattice");
    add_common(s_lattice, lattice.common);
    add_slice(s_lattice, lattice.slice, true);
    s_lattice->add_option("--field", lattice.field, "also write a field: zero, random or gradient");

    CheckArgs check;
    auto* s_check = app.add_subcommand("check", "path-independence and cube-consistency verdicts");
    add_common(s_check, check.common);
    add_slice(s_check, check.slice, true);
    s_check->add_option("--field", check.field, "edge-field CSV");
    s_check->add_option("--kappa", check.kappa, "diamond-field CSV");

    ReconstructArgs recon;
    auto* s_recon = app.add_subcommand("reconstruct", "edge field from curvature and gauge");
    add_common(s_recon, recon.common);
    add_slice(s_recon, recon.slice, true);
    s_recon->add_option("--kappa", recon.kappa, "diamond-field CSV")->required();
    s_recon->add_option("--alpha", recon.alpha, "gauge CSV")->required();

    EstimateArgs est;
    auto* s_est = app.add_subcommand("estimate", "pooled local order effects from an event log");
    add_common(s_est, est.common);
    add_log(s_est, est.log);
    s_est->add_option("--resamples", est.resamples, "bootstrap resamples")->capture_default_str();

    PlanArgs plan;
    auto* s_plan = app.add_subcommand("plan", "dynamic-programming and exhaustive planning");
    add_common(s_plan, plan.common);
    add_slice(s_plan, plan.slice, false);
    s_plan->add_option("--field", plan.field, "edge-field CSV");
    s_plan->add_option("--log", plan.log.log, "event-log CSV (family planning)");
    s_plan->add_option("--family", plan.log.families, "family u,w,v (repeatable)")->take_all();
    s_plan->add_option("--min-two-sided", plan.log.min_two_sided, "detection threshold")->capture_default_str();
    s_plan->add_option("--lambda", plan.log.lambda, "duration penalty per day")->capture_default_str();
    s_plan->add_option("--accept-activity", plan.log.accept_activity, "acceptance activity");
    s_plan->add_option("--lambdas", plan.lambdas, "sensitivity sweep values")->capture_default_str();
    s_plan->add_flag("--no-stop", plan.no_stop, "plan over maximal paths only");

    PolicyArgs pol;
    auto* s_pol = app.add_subcommand("policy", "held-out policy comparison");
    add_common(s_pol, pol.common);
    add_log(s_pol, pol.log);
    s_pol->add_flag("--allow-stop", pol.allow_stop, "let policies stop before the pair endpoint");
    s_pol->add_option("--resplits", pol.resplits, "seeded resplits for the win rate")->capture_default_str();

    SimulateArgs sim;
    auto* s_sim = app.add_subcommand("simulate", "synthetic event log from a causal model");
    add_common(s_sim, sim.common);
    add_slice(s_sim, sim.slice, false);
    s_sim->add_option("--preset", sim.preset, "family or random")->capture_default_str();
    s_sim->add_option("--n", sim.n, "number of cases")->capture_default_str();
    s_sim->add_option("--effect", sim.effect, "true local order effect (family preset)")->capture_default_str();
    s_sim->add_option("--lambda", sim.lambda, "duration penalty per day")->capture_default_str();
    s_sim->add_option("--contexts", sim.contexts, "context count (random preset)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*s_lattice) return cmd_lattice(lattice, out);
        if (*s_check) return cmd_check(check, out);
        if (*s_recon) return cmd_reconstruct(recon, out, err);
        if (*s_est) return cmd_estimate(est, out);
        if (*s_plan) return cmd_plan(plan, out);
        if (*s_pol) return cmd_policy(pol, out);
        if (*s_sim) return cmd_simulate(sim, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const PreconditionError& e) {
        err << "precondition failed: " << e.what() << "\n";
        return kPreconditionFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}

}  // namespace ordersens::cli
