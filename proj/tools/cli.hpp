#pragma once

#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "synckit/synckit.hpp"

namespace synckit::cli {

enum class Format { Text, Json, Dot };

struct Config {
    std::string network_path;
    std::string partition;
    std::string format = "text";
    std::size_t max_cells = default_max_cells();

    // reach
    std::string cell;
    int k = -1;

    // matched / invariant
    std::string kind = "n";

    // lattice
    bool dot = false;

    // quotient
    std::string out_path;

    // tables
    std::string quotient;

    // simulate / verify
    std::uint64_t seed = 1;
    int steps = 100;
    std::string x0 = "random";
    bool exo = false;
    std::string mode = "discrete";
    double dt = 1e-3;
    int trials = 10;
    double tol = -1;
    std::string check;
};

namespace detail {

using nlohmann::json;

inline int exit_code(const synckit::Error& e)
{
    switch (e.kind()) {
    case ErrorKind::NotBalanced:
    case ErrorKind::NotInLattice:
    case ErrorKind::PreconditionFailed:
    case ErrorKind::NumericalBlowup:
        return 1;
    default:
        return 2;
    }
}

inline json cells_json(const Network& net, const std::vector<int>& cells)
{
    json out = json::array();
    for (int c : cells)
        out.push_back(net.id(c));
    return out;
}

inline std::string cells_text(const Network& net, const std::vector<int>& cells)
{
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i)
        out += (i ? "," : "") + net.id(cells[i]);
    return out;
}

inline json blocks_json(const Network& net, const Partition& a)
{
    json out = json::array();
    for (const auto& block : a.colors())
        out.push_back(cells_json(net, block));
    return out;
}

inline json partition_json(const Network& net, const Partition& a)
{
    return {{"partition", format_partition(a, net.ids())}, {"rank", a.rank()}, {"colors", blocks_json(net, a)}};
}

inline std::string weight_text(MonoidSpec::value_type v)
{
    return v == MonoidSpec::infinity ? "inf" : std::to_string(v);
}

inline json weight_json(MonoidSpec::value_type v)
{
    if (v == MonoidSpec::infinity)
        return "inf";
    return v;
}

class Runner {
public:
    Runner(const Config& cfg, Format fmt, std::ostream& out) : cfg_(cfg), fmt_(fmt), out_(out) {}

    const Network& net()
    {
        if (!net_)
            net_ = load_network(cfg_.network_path);
        return *net_;
    }

    Partition partition(const std::string& spec) { return parse_partition(spec, net().ids()); }

    Partition partition() { return partition(cfg_.partition); }

    void emit(const json& j) { out_ << j.dump(2) << '\n'; }

    void emit_partition(const Partition& a)
    {
        if (fmt_ == Format::Json)
            emit(partition_json(net(), a));
        else if (fmt_ == Format::Dot)
            out_ << export_dot(net(), a);
        else
            out_ << format_partition(a, net().ids()) << '\n';
    }

    int verdict(bool value, const char* yes, const char* no, json extra = json::object())
    {
        if (fmt_ == Format::Json) {
            extra["result"] = value;
            emit(extra);
        } else {
            out_ << (value ? yes : no) << '\n';
        }
        return value ? 0 : 1;
    }

    int scc()
    {
        emit_partition(scc_decomposition(net()));
        return 0;
    }

    int rdc()
    {
        emit_partition(rdc_decomposition(net()));
        return 0;
    }

    int condense(bool roots_only)
    {
        const auto cond = condensation(net());
        const auto blocks = cond.scc_partition.colors();
        auto label = [](int b) { return "S" + std::to_string(b + 1); };
        if (fmt_ == Format::Json) {
            json j;
            j["blocks"] = blocks_json(net(), cond.scc_partition);
            j["roots"] = cond.roots;
            if (!roots_only) {
                j["edges"] = json::array();
                for (auto [a, b] : cond.dag_edges)
                    j["edges"].push_back({a, b});
            }
            emit(j);
        } else if (fmt_ == Format::Dot && !roots_only) {
            out_ << "digraph condensation {\n";
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                const bool root = std::find(cond.roots.begin(), cond.roots.end(), static_cast<int>(b)) != cond.roots.end();
                out_ << "  " << label(static_cast<int>(b)) << " [label=\"" << label(static_cast<int>(b)) << ": "
                     << cells_text(net(), blocks[b]) << "\"" << (root ? ", peripheries=2" : "") << "];\n";
            }
            for (auto [a, b] : cond.dag_edges)
                out_ << "  " << label(a) << " -> " << label(b) << ";\n";
            out_ << "}\n";
        } else if (roots_only) {
            for (int r : cond.roots)
                out_ << label(r) << ": " << cells_text(net(), blocks[r]) << '\n';
        } else {
            for (std::size_t b = 0; b < blocks.size(); ++b)
                out_ << label(static_cast<int>(b)) << ": " << cells_text(net(), blocks[b]) << '\n';
            for (auto [a, b] : cond.dag_edges)
                out_ << label(a) << " -> " << label(b) << '\n';
            out_ << "roots:";
            for (int r : cond.roots)
                out_ << ' ' << label(r);
            out_ << '\n';
        }
        return 0;
    }

    int reach()
    {
        const int c = net().index_of(cfg_.cell);
        const CellSet cells = cfg_.k >= 0 ? cumulative_in_k(net(), c, cfg_.k) : in_reachability(net(), c);
        if (fmt_ == Format::Json) {
            json j{{"cell", cfg_.cell}, {"cells", cells_json(net(), cells)}};
            if (cfg_.k >= 0)
                j["k"] = cfg_.k;
            emit(j);
        } else {
            out_ << cells_text(net(), cells) << '\n';
        }
        return 0;
    }

    int balanced()
    {
        const auto cert = is_balanced(net(), partition());
        if (fmt_ == Format::Json) {
            json j{{"result", cert.has_value()}};
            if (cert) {
                json q = json::array();
                for (int k = 0; k < cert->rank(); ++k) {
                    json row = json::array();
                    for (int l = 0; l < cert->rank(); ++l)
                        row.push_back(weight_json(cert->q(k, l)));
                    q.push_back(row);
                }
                j["quotient_matrix"] = q;
            }
            emit(j);
        } else if (cert) {
            out_ << "balanced\n";
            for (int k = 0; k < cert->rank(); ++k) {
                for (int l = 0; l < cert->rank(); ++l)
                    out_ << (l ? " " : "") << weight_text(cert->q(k, l));
                out_ << '\n';
            }
        } else {
            out_ << "not balanced\n";
        }
        return cert ? 0 : 1;
    }

    int cir()
    {
        emit_partition(cir_balanced(net(), partition()));
        return 0;
    }

    int lattice()
    {
        const auto lat = enumerate_balanced(net(), cfg_.max_cells);
        if (cfg_.dot || fmt_ == Format::Dot) {
            out_ << lattice_to_dot(lat, net().ids());
        } else if (fmt_ == Format::Json) {
            json j;
            j["elements"] = json::array();
            for (const auto& e : lat.elements)
                j["elements"].push_back(format_partition(e, net().ids()));
            j["covers"] = json::array();
            for (auto [lo, hi] : lat.cover_edges)
                j["covers"].push_back({lo, hi});
            j["top"] = lat.top;
            j["bottom"] = lat.bottom;
            emit(j);
        } else {
            for (const auto& e : lat.elements)
                out_ << format_partition(e, net().ids()) << '\n';
        }
        return 0;
    }

    BalancedCertificate certificate(const Partition& a)
    {
        auto cert = is_balanced(net(), a);
        if (!cert)
            throw synckit::Error(ErrorKind::NotBalanced, "'" + format_partition(a, net().ids()) + "' is not balanced");
        return *cert;
    }

    int quotient()
    {
        const Network q = quotient_network(net(), certificate(partition()));
        const std::string text = fmt_ == Format::Dot ? export_dot(q) : to_json(q).dump(2) + "\n";
        if (cfg_.out_path.empty()) {
            out_ << text;
        } else {
            std::ofstream f(cfg_.out_path);
            if (!f)
                throw synckit::Error(ErrorKind::MalformedDocument, "cannot write '" + cfg_.out_path + "'");
            f << text;
        }
        return 0;
    }

    int exo() { return verdict(is_exo_balanced(net(), partition()), "exo-balanced", "not exo-balanced"); }

    int classify()
    {
        const Partition a = partition();
        const auto classes = classify_colors(net(), a);
        const auto blocks = a.colors();
        const ColorClass overall = classify_partition(net(), a);
        if (fmt_ == Format::Json) {
            json colors = json::array();
            for (std::size_t k = 0; k < blocks.size(); ++k)
                colors.push_back({{"cells", cells_json(net(), blocks[k])}, {"class", to_string(classes[k])}});
            emit({{"partition", format_partition(a, net().ids())}, {"colors", colors}, {"class", to_string(overall)}});
        } else {
            for (std::size_t k = 0; k < blocks.size(); ++k)
                out_ << cells_text(net(), blocks[k]) << ": " << to_string(classes[k]) << '\n';
            out_ << "partition: " << to_string(overall) << '\n';
        }
        return 0;
    }

    int matched()
    {
        const auto kind = parse_neighborhood_kind(cfg_.kind);
        return verdict(is_matched(net(), partition(), kind), "matched", "not matched", {{"kind", kind.name()}});
    }

    int invariant()
    {
        const auto kind = parse_neighborhood_kind(cfg_.kind);
        const auto cert = certificate(partition());
        return verdict(is_invariant(net(), cert, kind), "invariant", "not invariant", {{"kind", kind.name()}});
    }

    int tables()
    {
        const auto lat = enumerate_balanced(net(), cfg_.max_cells);
        const auto& ids = net().ids();
        if (!cfg_.quotient.empty()) {
            const auto cert = certificate(partition(cfg_.quotient));
            const auto report = quotient_class_report(net(), cert, lat);
            const Network q = quotient_network(net(), cert);
            if (fmt_ == Format::Json) {
                json entries = json::array();
                for (const auto& e : report.entries)
                    entries.push_back({{"partition", format_partition(lat.elements[e.element], ids)},
                                       {"image", format_partition(e.image, q.ids())},
                                       {"class", to_string(e.in_g)},
                                       {"quotient_class", to_string(e.in_q)}});
                emit({{"r_invariant", report.precondition_met}, {"entries", entries},
                      {"violations", report.violations.size()}});
            } else {
                out_ << "r-invariant: " << (report.precondition_met ? "yes" : "no (unchecked)") << '\n';
                for (const auto& e : report.entries)
                    out_ << format_partition(lat.elements[e.element], ids) << ' ' << class_letter(e.in_g) << " -> "
                         << format_partition(e.image, q.ids()) << ' ' << class_letter(e.in_q) << '\n';
                out_ << "violations: " << report.violations.size() << '\n';
            }
            return report.ok() && report.precondition_met ? 0 : 1;
        }
        const auto report = join_table_report(net(), lat);
        const char letters[] = {'S', 'R', 'W'};
        if (fmt_ == Format::Json) {
            json counts = json::array();
            for (int a = 0; a < 3; ++a)
                for (int b = a; b < 3; ++b)
                    for (int j = 0; j < 3; ++j)
                        if (int n = report.counts[a][b][j])
                            counts.push_back({{"left", std::string(1, letters[a])},
                                              {"right", std::string(1, letters[b])},
                                              {"join", std::string(1, letters[j])},
                                              {"pairs", n}});
            emit({{"elements", lat.size()}, {"rooted_r_matched", report.rooted_matched}, {"counts", counts},
                  {"general_violations", report.general_violations.size()},
                  {"matched_violations", report.matched_violations.size()}});
        } else {
            out_ << "elements: " << lat.size() << '\n';
            out_ << "rooted elements r-matched: " << (report.rooted_matched ? "yes" : "no") << '\n';
            for (int a = 0; a < 3; ++a)
                for (int b = a; b < 3; ++b)
                    for (int j = 0; j < 3; ++j)
                        if (int n = report.counts[a][b][j])
                            out_ << letters[a] << " v " << letters[b] << " = " << letters[j] << ": " << n << '\n';
            out_ << "violations: " << report.general_violations.size() + report.matched_violations.size() << '\n';
        }
        return report.ok() ? 0 : 1;
    }

    EvolveOptions evolve_options() const
    {
        EvolveOptions o;
        o.mode = cfg_.mode == "rk4" ? Integrator::RK4 : Integrator::Discrete;
        o.steps = cfg_.steps;
        o.dt = cfg_.dt;
        return o;
    }

    int simulate()
    {
        const auto spec = sample_admissible(net(), cfg_.seed, cfg_.exo);
        State x0;
        if (cfg_.x0 == "random") {
            std::mt19937_64 rng(cfg_.seed);
            std::uniform_real_distribution<double> u(-2.0, 2.0);
            for (std::size_t c = 0; c < net().size(); ++c)
                x0.push_back(u(rng));
        } else {
            std::stringstream ss(cfg_.x0);
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    x0.push_back(std::stod(item));
                } catch (const std::exception&) {
                    throw synckit::Error(ErrorKind::MalformedDocument, "bad --x0 entry '" + item + "'");
                }
            }
            if (x0.size() != net().size())
                throw synckit::Error(ErrorKind::MalformedDocument, "--x0 needs one value per cell");
        }
        const auto traj = evolve(net(), spec, x0, evolve_options());
        if (fmt_ == Format::Json) {
            emit({{"mode", cfg_.mode}, {"cells", net().ids()}, {"times", traj.times}, {"states", traj.states}});
        } else {
            out_ << std::setprecision(17) << "t";
            for (const auto& id : net().ids())
                out_ << ',' << id;
            out_ << '\n';
            for (std::size_t s = 0; s < traj.states.size(); ++s) {
                out_ << traj.times[s];
                for (double v : traj.states[s])
                    out_ << ',' << v;
                out_ << '\n';
            }
        }
        return 0;
    }

    int verify()
    {
        const auto spec = sample_admissible(net(), cfg_.seed, cfg_.exo);
        CheckOptions opts;
        opts.trials = cfg_.trials;
        opts.evolve = evolve_options();
        opts.tol = cfg_.tol >= 0 ? cfg_.tol : (opts.evolve.mode == Integrator::Discrete ? 1e-9 : 1e-6);
        json j{{"check", cfg_.check}, {"seed", cfg_.seed}, {"trials", cfg_.trials}};
        bool ok = false;
        if (cfg_.check == "invariance") {
            const auto r = check_invariance(net(), spec, partition(), opts);
            j.update({{"max_spread", r.max_spread}, {"aborted", r.aborted}, {"tol", opts.tol}});
            ok = r.invariant;
        } else if (cfg_.check == "locality") {
            const int k = cfg_.k >= 0 ? cfg_.k : 1;
            const auto r = check_locality(net(), spec, net().index_of(cfg_.cell), k, cfg_.trials);
            j.update({{"cell", cfg_.cell}, {"k", k}, {"perturbed_cells", r.perturbed_cells}, {"mismatches", r.mismatches}});
            ok = r.mismatches == 0;
        } else if (cfg_.check == "subsystem") {
            const auto r = check_subsystem(net(), spec, net().index_of(cfg_.cell), opts);
            j.update({{"cell", cfg_.cell}, {"max_deviation", r.max_deviation}, {"bitwise", r.bitwise}});
            ok = r.passed;
        } else {
            const auto r = check_quotient_consistency(net(), spec, certificate(partition()), opts);
            j.update({{"max_deviation", r.max_deviation}, {"bitwise", r.bitwise}});
            ok = r.passed;
        }
        j["passed"] = ok;
        if (fmt_ == Format::Json)
            emit(j);
        else
            out_ << cfg_.check << ": " << (ok ? "pass" : "fail") << '\n';
        return ok ? 0 : 1;
    }

    int export_dot_cmd()
    {
        std::optional<Partition> a;
        if (!cfg_.partition.empty())
            a = partition();
        out_ << export_dot(net(), a);
        return 0;
    }

private:
    const Config& cfg_;
    Format fmt_;
    std::ostream& out_;
    std::optional<Network> net_;
};

} // namespace detail

/// Parses argv, runs one subcommand and returns the exit code:
/// 0 success, 1 when a queried property is false, 2 on usage or input errors.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Config cfg;
    CLI::App app{"Synchrony analysis for weighted coupled cell networks", "synckit"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    auto common = [&](CLI::App* sub) {
        sub->add_option("--network,-n", cfg.network_path, "Network JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--format,-f", cfg.format, "Output format")->check(CLI::IsMember({"text", "json", "dot"}));
        return sub;
    };
    auto with_partition = [&](CLI::App* sub, bool required = true) {
        auto* opt = sub->add_option("--partition,-p", cfg.partition, "Partition such as 12/45 or a,b/c");
        if (required)
            opt->required();
        return sub;
    };
    auto with_dynamics = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "Function and state seed");
        sub->add_option("--steps", cfg.steps, "Number of steps")->check(CLI::NonNegativeNumber);
        sub->add_flag("--exo", cfg.exo, "Use couplings blind to same-state inputs");
        sub->add_option("--mode", cfg.mode, "Integrator")->check(CLI::IsMember({"discrete", "rk4"}));
        sub->add_option("--dt", cfg.dt, "RK4 step")->check(CLI::PositiveNumber);
        return sub;
    };

    auto* scc = common(app.add_subcommand("scc", "Strongly connected components"));
    auto* condense = common(app.add_subcommand("condense", "Condensation DAG of the SCCs"));
    auto* roots = common(app.add_subcommand("roots", "Root SCCs"));
    auto* rdc = common(app.add_subcommand("rdc", "Root dependency classes"));
    auto* reach = common(app.add_subcommand("reach", "In-reachability, or V_k with --k"));
    reach->add_option("--cell,-c", cfg.cell, "Cell id")->required();
    reach->add_option("--k", cfg.k, "Path length bound")->check(CLI::NonNegativeNumber);
    auto* balanced = with_partition(common(app.add_subcommand("balanced", "Balanced check with quotient matrix")));
    auto* cir = with_partition(common(app.add_subcommand("cir", "Coarsest balanced refinement")));
    auto* lattice = common(app.add_subcommand("lattice", "All balanced partitions"));
    lattice->add_flag("--dot", cfg.dot, "Hasse diagram in DOT");
    auto* quotient = with_partition(common(app.add_subcommand("quotient", "Quotient network over a balanced partition")));
    quotient->add_option("--out,-o", cfg.out_path, "Write the network here instead of stdout");
    auto* exo = with_partition(common(app.add_subcommand("exo", "Exo-balanced check")));
    auto* classify = with_partition(common(app.add_subcommand("classify", "Strong/rooted/weak classes")));
    auto* matched = with_partition(common(app.add_subcommand("matched", "Neighborhood matched check")));
    matched->add_option("--kind,-k", cfg.kind, "n, v, vk:<k> or r");
    auto* invariant = with_partition(common(app.add_subcommand("invariant", "Neighborhood invariance check")));
    invariant->add_option("--kind,-k", cfg.kind, "n, v, vk:<k> or r");
    auto* tables = common(app.add_subcommand("tables", "Join table, or quotient table with --quotient"));
    tables->add_option("--quotient", cfg.quotient, "Balanced partition to quotient over");
    auto* simulate = with_dynamics(common(app.add_subcommand("simulate", "Evolve a sampled admissible system")));
    simulate->add_option("--x0", cfg.x0, "Comma-separated initial state or 'random'");
    auto* verify = with_dynamics(with_partition(common(app.add_subcommand("verify", "Numerical checks")), false));
    verify->add_option("check", cfg.check, "What to verify")
        ->required()
        ->check(CLI::IsMember({"invariance", "locality", "subsystem", "quotient"}));
    verify->add_option("--cell,-c", cfg.cell, "Cell id for locality and subsystem");
    verify->add_option("--k", cfg.k, "Locality depth")->check(CLI::NonNegativeNumber);
    verify->add_option("--trials", cfg.trials, "Trials")->check(CLI::PositiveNumber);
    verify->add_option("--tol", cfg.tol, "Tolerance (default 1e-9 discrete, 1e-6 rk4)");
    auto* dot = with_partition(common(app.add_subcommand("export-dot", "Network in DOT")), false);

    for (auto* sub : app.get_subcommands({}))
        sub->add_option("--max-cells", cfg.max_cells, "Enumeration cap (env SYNCKIT_MAX_CELLS)")
            ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const Format fmt = cfg.format == "json" ? Format::Json : cfg.format == "dot" ? Format::Dot : Format::Text;
    detail::Runner r(cfg, fmt, out);
    try {
        if (scc->parsed()) return r.scc();
        if (condense->parsed()) return r.condense(false);
        if (roots->parsed()) return r.condense(true);
        if (rdc->parsed()) return r.rdc();
        if (reach->parsed()) return r.reach();
        if (balanced->parsed()) return r.balanced();
        if (cir->parsed()) return r.cir();
        if (lattice->parsed()) return r.lattice();
        if (quotient->parsed()) return r.quotient();
        if (exo->parsed()) return r.exo();
        if (classify->parsed()) return r.classify();
        if (matched->parsed()) return r.matched();
        if (invariant->parsed()) return r.invariant();
        if (tables->parsed()) return r.tables();
        if (simulate->parsed()) return r.simulate();
        if (verify->parsed()) {
            const bool needs_cell = cfg.check == "locality" || cfg.check == "subsystem";
            if (needs_cell ? cfg.cell.empty() : cfg.partition.empty()) {
                err << "verify " << cfg.check << " needs " << (needs_cell ? "--cell" : "--partition") << '\n';
                return 2;
            }
            return r.verify();
        }
        if (dot->parsed()) return r.export_dot_cmd();
    } catch (const synckit::Error& e) {
        err << e.what() << '\n';
        return detail::exit_code(e);
    }
    return 2;
}

} // namespace synckit::cli
