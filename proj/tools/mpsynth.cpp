#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mpsynth/bench.hpp"
#include "mpsynth/dfa.hpp"
#include "mpsynth/enumeration.hpp"
#include "mpsynth/errors.hpp"
#include "mpsynth/harness.hpp"
#include "mpsynth/symbolic.hpp"
#include "mpsynth/transducer_io.hpp"

using namespace mpsynth;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnrealizable = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitInternal = 4;

size_t node_ceiling_from_env() {
    if (const char* env = std::getenv("MPSYNTH_NODE_CEILING")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<size_t>(v);
        throw ParseError("MPSYNTH_NODE_CEILING must be a positive integer");
    }
    return BddEngine::kDefaultNodeCeiling;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

VarOrderPreset order_from_string(const std::string& name) {
    if (name == "default") return VarOrderPreset::kDefault;
    if (name == "interleaved") return VarOrderPreset::kInterleaved;
    throw ParseError("unknown variable order '" + name + "'");
}

struct Pipeline {
    Spec spec;
    std::vector<Dfa> dfas;
    BddEngine engine;
    SymbolicArena arena;
    WinningFormulas wf;

    Pipeline(const std::string& path, const std::string& order, size_t ceiling)
        : spec(parse_spec(read_file(path))),
          dfas(build_goal_dfas(spec)),
          engine(ceiling),
          arena(encode(dfas, spec.inputs, spec.outputs, engine,
                       order_from_string(order))),
          wf(symbolic_fixpoint(arena)) {}
};

std::string sets_to_json(const std::vector<GoalSet>& sets,
                         const std::vector<Goal>& goals) {
    std::string out = "[";
    for (size_t i = 0; i < sets.size(); ++i) {
        if (i) out += ",";
        out += "[";
        bool first = true;
        for (uint32_t g = 0; g < goals.size(); ++g) {
            if (!((sets[i] >> g) & 1u)) continue;
            if (!first) out += ",";
            out += "\"" + goals[g].label + "\"";
            first = false;
        }
        out += "]";
    }
    return out + "]";
}

GoalSet parse_goal_selection(const Spec& spec, const std::string& csv) {
    GoalSet set = 0;
    std::istringstream is(csv);
    std::string label;
    while (std::getline(is, label, ',')) {
        auto idx = spec.goal_index(label);
        if (!idx) throw ParseError("unknown goal label '" + label + "'");
        set |= 1u << *idx;
    }
    return set;
}

std::vector<uint32_t> parse_int_list(const std::string& csv) {
    std::vector<uint32_t> out;
    std::istringstream is(csv);
    std::string item;
    while (std::getline(is, item, ','))
        out.push_back(static_cast<uint32_t>(std::stoul(item)));
    if (out.empty()) throw ParseError("empty parameter list");
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"multi-property finite-trace synthesis"};
    app.require_subcommand(1);
    size_t ceiling = node_ceiling_from_env();

    // --- maximal ---------------------------------------------------------
    auto* cmd_maximal = app.add_subcommand(
        "maximal", "print all maximal realizable goal sets at the start");
    std::string maximal_spec, maximal_order = "default";
    cmd_maximal->add_option("spec", maximal_spec)->required();
    cmd_maximal->add_option("--var-order", maximal_order)
        ->check(CLI::IsMember({"default", "interleaved"}));

    // --- synth -----------------------------------------------------------
    auto* cmd_synth =
        app.add_subcommand("synth", "extract a winning strategy");
    std::string synth_spec, synth_goals, synth_out, synth_dot,
        synth_order = "default";
    bool synth_maximum = false;
    cmd_synth->add_option("spec", synth_spec)->required();
    cmd_synth->add_option("--goals", synth_goals,
                          "comma-separated goal labels");
    cmd_synth->add_flag("--maximum", synth_maximum,
                        "use a maximum-cardinality realizable set");
    cmd_synth->add_option("--out", synth_out, "transducer JSON path");
    cmd_synth->add_option("--dot", synth_dot, "transducer DOT path");
    cmd_synth->add_option("--var-order", synth_order)
        ->check(CLI::IsMember({"default", "interleaved"}));

    // --- enum ------------------------------------------------------------
    auto* cmd_enum =
        app.add_subcommand("enum", "pruned enumeration baseline, CSV report");
    std::string enum_spec, enum_mode = "symbolic";
    bool enum_serial = false;
    cmd_enum->add_option("spec", enum_spec)->required();
    cmd_enum->add_option("--mode", enum_mode)
        ->check(CLI::IsMember({"symbolic", "explicit"}));
    cmd_enum->add_flag("--serial", enum_serial, "disable parallel subset checks");

    // --- simulate ---------------------------------------------------------
    auto* cmd_sim = app.add_subcommand("simulate", "run a strategy");
    std::string sim_spec, sim_strategy, sim_env = "random";
    uint32_t sim_depth = 8;
    uint64_t sim_seed = 0;
    uint32_t sim_rounds = 64;
    cmd_sim->add_option("spec", sim_spec)->required();
    cmd_sim->add_option("--strategy", sim_strategy)->required();
    cmd_sim->add_option("--env", sim_env)
        ->check(CLI::IsMember({"random", "exhaustive"}));
    cmd_sim->add_option("--depth", sim_depth, "exhaustive depth");
    cmd_sim->add_option("--seed", sim_seed);
    cmd_sim->add_option("--max-rounds", sim_rounds);

    // --- bench ------------------------------------------------------------
    auto* cmd_bench = app.add_subcommand("bench", "benchmark family runner");
    std::string bench_family, bench_n = "2", bench_d = "2", bench_out;
    uint64_t bench_seed = 0;
    double bench_timeout = 0.0;
    bool bench_compare = false;
    cmd_bench->add_option("--family", bench_family)->required()
        ->check(CLI::IsMember({"chain", "until", "next", "counter", "robotnav"}));
    cmd_bench->add_option("--n", bench_n, "goal counts (comma list)");
    cmd_bench->add_option("--d", bench_d, "depth parameters (comma list)");
    cmd_bench->add_option("--seed", bench_seed);
    cmd_bench->add_flag("--compare", bench_compare,
                        "also run the enumeration baseline");
    cmd_bench->add_option("--timeout", bench_timeout, "per-instance seconds");
    cmd_bench->add_option("--out", bench_out, "CSV path (default stdout)");

    // --- dfa ---------------------------------------------------------------
    auto* cmd_dfa = app.add_subcommand("dfa", "compile one formula to a DFA");
    std::string dfa_formula, dfa_atoms, dfa_dot;
    cmd_dfa->add_option("--formula", dfa_formula)->required();
    cmd_dfa->add_option("--atoms", dfa_atoms,
                        "comma-separated alphabet (default: formula atoms)");
    cmd_dfa->add_option("--dot", dfa_dot, "DOT output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (cmd_maximal->parsed()) {
        Pipeline p(maximal_spec, maximal_order, ceiling);
        auto sets = maximal_assignments(p.wf, p.arena, p.arena.initial_tuple);
        std::cout << sets_to_json(sets, p.spec.goals) << "\n";
        return kExitOk;
    }

    if (cmd_synth->parsed()) {
        if (synth_maximum == !synth_goals.empty())
            throw ParseError("synth needs exactly one of --goals or --maximum");
        Pipeline p(synth_spec, synth_order, ceiling);
        GoalSet target = synth_maximum
                             ? maximum_assignment(p.wf, p.arena,
                                                  p.arena.initial_tuple)
                             : parse_goal_selection(p.spec, synth_goals);
        if (!query_realizable_initial(p.wf, p.arena, target)) {
            std::vector<std::string> labels;
            for (const Goal& g : p.spec.goals) labels.push_back(g.label);
            std::cerr << "unrealizable: " << goal_set_to_string(target, labels)
                      << "\n";
            return kExitUnrealizable;
        }
        Transducer t = symbolic_strategy(p.wf, p.arena, target);
        std::string json = transducer_to_json(t);
        if (synth_out.empty())
            std::cout << json;
        else
            write_file(synth_out, json);
        if (!synth_dot.empty()) write_file(synth_dot, transducer_to_dot(t));
        std::vector<std::string> labels;
        for (const Goal& g : p.spec.goals) labels.push_back(g.label);
        std::cerr << "realizable: " << goal_set_to_string(target, labels)
                  << " (" << t.states.size() << " strategy states)\n";
        return kExitOk;
    }

    if (cmd_enum->parsed()) {
        Spec spec = parse_spec(read_file(enum_spec));
        std::vector<Dfa> dfas = build_goal_dfas(spec);
        EnumOpts opts;
        opts.mode = enum_mode == "symbolic" ? SolveMode::kSymbolic
                                            : SolveMode::kExplicit;
        opts.parallel = !enum_serial;
        opts.node_ceiling = ceiling;
        EnumReport report = enumerate_maximal(spec, dfas, opts);
        std::vector<std::string> labels;
        for (const Goal& g : spec.goals) labels.push_back(g.label);
        std::cout << enum_report_to_csv(report, labels);
        std::cerr << "maximal: " << sets_to_json(report.maximal, spec.goals)
                  << (report.complete ? "" : " (incomplete)") << "\n";
        return kExitOk;
    }

    if (cmd_sim->parsed()) {
        Spec spec = parse_spec(read_file(sim_spec));
        Transducer t = transducer_from_json(read_file(sim_strategy));
        EnvPolicy env = sim_env == "random" ? EnvPolicy::random(sim_seed)
                                            : EnvPolicy::exhaustive(sim_depth);
        SimResult result = simulate(spec, t, env, sim_rounds);
        std::cout << trace_dump(spec, t, result);
        std::vector<std::string> labels;
        for (const Goal& g : spec.goals) labels.push_back(g.label);
        switch (result.verdict) {
            case Verdict::kSatisfied:
                std::cout << "verdict: satisfied "
                          << goal_set_to_string(result.satisfied, labels) << "\n";
                return kExitOk;
            case Verdict::kVacuous:
                std::cout << "verdict: vacuous {}\n";
                return kExitOk;
            case Verdict::kBudgetExceeded:
                std::cout << "verdict: budget-exceeded (" << result.message
                          << ")\n";
                return kExitUnrealizable;
            case Verdict::kStrategyError:
                std::cout << "verdict: strategy-error (" << result.message
                          << ")\n";
                return kExitInternal;
        }
        return kExitInternal;
    }

    if (cmd_bench->parsed()) {
        Family family = *family_from_string(bench_family);
        std::vector<uint32_t> ns = parse_int_list(bench_n);
        std::vector<uint32_t> ds = parse_int_list(bench_d);
        struct Job {
            uint32_t n, d;
        };
        std::vector<Job> jobs;
        for (uint32_t n : ns)
            for (uint32_t d : ds) jobs.push_back({n, d});
        std::vector<std::string> rows(jobs.size());
        std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (jobs.size() > 1)
#endif
        for (size_t i = 0; i < jobs.size(); ++i) {
            try {
                FamilyParams params{family, jobs[i].n, jobs[i].d, bench_seed};
                Spec spec = parse_spec(generate(params));
                CompareOpts opts;
                opts.with_enum = bench_compare;
                opts.timeout_seconds = bench_timeout;
                opts.node_ceiling = ceiling;
                rows[i] = comparison_csv_row(run_comparison(
                    spec, bench_family, jobs[i].n, jobs[i].d, opts));
            } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        std::string csv = comparison_csv_header();
        for (const std::string& row : rows) csv += row;
        if (bench_out.empty())
            std::cout << csv;
        else
            write_file(bench_out, csv);
        return kExitOk;
    }

    if (cmd_dfa->parsed()) {
        FormulaFactory factory;
        std::set<std::string> atoms;
        std::vector<std::string> ordered;
        if (!dfa_atoms.empty()) {
            std::istringstream is(dfa_atoms);
            std::string atom;
            while (std::getline(is, atom, ',')) {
                if (atoms.insert(atom).second) ordered.push_back(atom);
            }
        } else {
            // Atoms in first-appearance order from the formula text.
            static const std::set<std::string> reserved = {
                "true", "false", "X", "WX", "F", "G", "U", "R"};
            std::string word;
            auto flush = [&]() {
                if (!word.empty() && !reserved.count(word) &&
                    !std::isdigit(static_cast<unsigned char>(word[0])) &&
                    atoms.insert(word).second)
                    ordered.push_back(word);
                word.clear();
            };
            for (char c : dfa_formula) {
                if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
                    word += c;
                else
                    flush();
            }
            flush();
        }
        Formula f = parse_formula(factory, dfa_formula, atoms);
        Dfa d = build_dfa(factory, f, Alphabet{ordered});
        std::string dot = dfa_to_dot(d);
        if (dfa_dot.empty())
            std::cout << dot;
        else
            write_file(dfa_dot, dot);
        std::cerr << "states: " << d.num_states << "\n";
        return kExitOk;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const TimeoutError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const UnrealizableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnrealizable;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
