// npqc-lab: batch experiment runner. Each subcommand writes CSV files with
// a '#'-prefixed JSON header carrying the fully resolved config, so any
// output can be reproduced with --config.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "npqc/errors.hpp"
#include "npqc/metrology.hpp"
#include "npqc/rng.hpp"
#include "npqc/superposition.hpp"
#include "npqc/train.hpp"

using json = nlohmann::json;
using namespace npqc;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitCapacity = 4;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const json& header,
              const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_) throw ArgumentError("cannot open output file " + path.string());
        out_ << "# " << header.dump() << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i) {
            out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
        }
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
        }
    }

private:
    std::ofstream out_;
};

Variant parse_variant(const std::string& name) {
    if (name == "full") return Variant::FULL;
    if (name == "y_only") return Variant::Y_ONLY;
    throw ArgumentError("unknown variant '" + name + "' (expected full or y_only)");
}

ParamVector random_theta(const NpqcSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 2.0 * std::numbers::pi);
    ParamVector theta(static_cast<std::size_t>(spec.num_params()));
    for (double& v : theta) v = unif(rng);
    return theta;
}

// FNV-1a over the parameter bytes; identifies theta in QFIM exports.
std::string theta_hash(const ParamVector& theta) {
    std::uint64_t h = 14695981039346656037ULL;
    for (double v : theta) {
        const auto* bytes = reinterpret_cast<const unsigned char*>(&v);
        for (std::size_t i = 0; i < sizeof(double); ++i) {
            h = (h ^ bytes[i]) * 1099511628211ULL;
        }
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Resolution order: defaults, then config file, then explicit flags.
struct ConfigMerge {
    json resolved;

    explicit ConfigMerge(const std::string& config_path, json defaults)
        : resolved(std::move(defaults)) {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ArgumentError("cannot read config file " + config_path);
            json file = json::parse(in);
            for (auto& [key, value] : file.items()) resolved[key] = value;
        }
    }

    template <typename T>
    void flag(const CLI::App& app, const std::string& flag_name, const std::string& key,
              const T& value) {
        if (app.count(flag_name) > 0) resolved[key] = value;
    }
};

// ---- qfim ------------------------------------------------------------

int cmd_qfim(const json& cfg, const std::filesystem::path& out_dir) {
    const NpqcSpec spec(cfg.at("n_qubits"), cfg.at("n_layers"),
                        parse_variant(cfg.at("variant")));
    const std::string theta_mode = cfg.at("theta");
    const std::uint64_t seed = cfg.at("seed");

    ParamVector theta;
    if (theta_mode == "reference") {
        theta = reference_params(spec);
    } else if (theta_mode == "random") {
        auto rng = make_stream(seed);
        theta = random_theta(spec, rng);
    } else {
        throw ArgumentError("qfim: --theta must be reference or random");
    }

    const QfimMatrix f = qfim(spec, theta);
    const int m = spec.num_params();

    json header = cfg;
    header["command"] = "qfim";
    header["m"] = m;
    header["theta_hash"] = theta_hash(theta);

    {
        std::vector<std::string> cols;
        for (int j = 0; j < m; ++j) cols.push_back("f" + std::to_string(j));
        CsvWriter matrix(out_dir / "qfim.csv", header, cols);
        for (int i = 0; i < m; ++i) {
            std::vector<std::string> cells;
            for (int j = 0; j < m; ++j) cells.push_back(fmt(f(i, j)));
            matrix.row(cells);
        }
    }

    const double max_dev_identity =
        (f - QfimMatrix::Identity(m, m)).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<QfimMatrix> eig(f, Eigen::EigenvaluesOnly);
    const InverseTraceResult inv = trace_inverse(f);

    CsvWriter summary(out_dir / "qfim_summary.csv", header,
                      {"m", "max_dev_identity", "trace_f", "trace_f_inv", "rank",
                       "min_eigenvalue"});
    summary.row({std::to_string(m), fmt(max_dev_identity), fmt(f.trace()),
                 fmt(inv.trace_inverse), std::to_string(inv.rank),
                 fmt(eig.eigenvalues().minCoeff())});

    std::cout << "qfim: M=" << m << " max|F-I|=" << max_dev_identity
              << " Tr(F)=" << f.trace() << " Tr(F^-1)=" << inv.trace_inverse << "\n";
    return 0;
}

// ---- train -----------------------------------------------------------

Method parse_method(const std::string& name) {
    if (name == "adaptive") return Method::ADAPTIVE_GA;
    if (name == "standard") return Method::STANDARD_GA;
    if (name == "adam") return Method::ADAM;
    throw ArgumentError("unknown method '" + name + "'");
}

int cmd_train(const json& cfg, const std::filesystem::path& out_dir) {
    const NpqcSpec spec(cfg.at("n_qubits"), cfg.at("n_layers"),
                        parse_variant(cfg.at("variant")));
    const std::string init = cfg.at("init");
    const double initial_infidelity = cfg.at("initial_infidelity");
    const int n_seeds = cfg.at("n_seeds");
    const std::uint64_t seed = cfg.at("seed");

    OptimizerConfig opt;
    opt.method = parse_method(cfg.at("method"));
    opt.max_iters = cfg.at("max_iters");
    opt.target_infidelity = cfg.at("target_infidelity");
    opt.adaptive_iters = cfg.at("adaptive_iters");
    opt.post_adaptive_rate = cfg.at("post_adaptive_rate");
    opt.fixed_rate = cfg.at("fixed_rate");
    opt.adam_rate = cfg.at("adam_rate");

    json header = cfg;
    header["command"] = "train";
    CsvWriter trace_csv(out_dir / "train_trace.csv", header,
                        {"iteration", "fidelity", "grad_norm", "rate", "method", "seed"});

    const std::string& method_name = cfg.at("method");
    for (int s = 0; s < n_seeds; ++s) {
        auto rng = make_stream(seed, static_cast<std::uint64_t>(s));
        ParamVector theta0 = init == "random" ? random_theta(spec, rng)
                                              : reference_params(spec);
        const ParamVector theta_t =
            target_params_from(spec, theta0, 1.0 - initial_infidelity, rng);
        const StateVector target = prepare_state(spec, theta_t);
        const TrainTrace trace = train(spec, theta0, target, opt, seed);
        for (const TrainRecord& r : trace.records) {
            trace_csv.row({std::to_string(r.iteration), fmt(r.fidelity), fmt(r.grad_norm),
                           fmt(r.rate), method_name, std::to_string(s)});
        }
    }
    std::cout << "train: wrote " << (out_dir / "train_trace.csv").string() << "\n";
    return 0;
}

// ---- scan ------------------------------------------------------------

int cmd_scan(const json& cfg, const std::filesystem::path& out_dir) {
    const NpqcSpec spec(cfg.at("n_qubits"), cfg.at("n_layers"),
                        parse_variant(cfg.at("variant")));
    const std::string init = cfg.at("init");
    const int n_seeds = cfg.at("n_seeds");
    const std::uint64_t seed = cfg.at("seed");
    std::vector<double> grid = cfg.at("infidelities").get<std::vector<double>>();

    std::vector<std::uint64_t> seeds;
    for (int s = 0; s < n_seeds; ++s) {
        std::uint64_t base = seed;
        seeds.push_back(splitmix64(base) + static_cast<std::uint64_t>(s));
    }
    const ScanResult result = single_step_scan(
        spec, grid, init == "random" ? InitMode::RANDOM : InitMode::REFERENCE, seeds);

    json header = cfg;
    header["command"] = "scan";
    header["fit_c"] = result.fit_c;
    header["fit_nu"] = result.fit_nu;
    CsvWriter csv(out_dir / "scan.csv", header,
                  {"infidelity_before", "mean_infidelity_after", "fit_c", "fit_nu"});
    for (const ScanPoint& pt : result.points) {
        csv.row({fmt(pt.infidelity_before), fmt(pt.mean_infidelity_after), fmt(result.fit_c),
                 fmt(result.fit_nu)});
    }
    std::cout << "scan: init=" << init << " fitted c=" << result.fit_c
              << " nu=" << result.fit_nu << "\n";
    return 0;
}

// ---- sense -----------------------------------------------------------

int cmd_sense(const json& cfg, const std::filesystem::path& out_dir, int threads) {
    const int n = cfg.at("n_qubits");
    const std::uint64_t seed = cfg.at("seed");
    const int instances = cfg.at("instances");
    const std::vector<int> layer_list = cfg.at("n_layers").get<std::vector<int>>();
    const std::vector<double> norms = cfg.at("norms").get<std::vector<double>>();
    std::vector<long long> shots = cfg.at("shots").get<std::vector<long long>>();
    if (cfg.at("exact").get<bool>()) shots.push_back(-1);

    json header = cfg;
    header["command"] = "sense";
    header["rmse_normalization"] = "mean_abs_dtheta_entries";
    CsvWriter csv(out_dir / "sense.csv", header,
                  {"n_qubits", "n_layers", "m", "norm_dtheta", "shots", "instance",
                   "rel_rmse", "leakage_fraction", "seed"});
    CsvWriter crao_csv(out_dir / "crao.csv", header,
                       {"n_qubits", "n_layers", "m", "theta", "trace_f", "trace_f_inv",
                        "rank", "trace_bound_ok", "inverse_bound_ok"});

    for (int p : layer_list) {
        const NpqcSpec spec(n, p, Variant::Y_ONLY);
        for (double norm : norms) {
            const auto rows = sense_experiment(spec, norm, shots, instances, seed, threads);
            for (const SenseRow& r : rows) {
                csv.row({std::to_string(r.n_qubits), std::to_string(r.n_layers),
                         std::to_string(r.m), fmt(r.norm_dtheta), std::to_string(r.shots),
                         std::to_string(r.instance), fmt(r.rel_rmse),
                         fmt(r.leakage_fraction), std::to_string(r.seed)});
            }
        }

        const CraoReport at_ref = crao_check(spec, reference_params(spec));
        crao_csv.row({std::to_string(n), std::to_string(p), std::to_string(at_ref.m),
                      "reference", fmt(at_ref.trace_f), fmt(at_ref.trace_f_inv),
                      std::to_string(at_ref.rank), std::to_string(at_ref.trace_bound_ok),
                      std::to_string(at_ref.inverse_bound_ok)});
        auto rng = make_stream(seed, 0xC7A0);
        const CraoReport at_random = crao_check(spec, random_theta(spec, rng));
        crao_csv.row({std::to_string(n), std::to_string(p), std::to_string(at_random.m),
                      "random", fmt(at_random.trace_f), fmt(at_random.trace_f_inv),
                      std::to_string(at_random.rank), std::to_string(at_random.trace_bound_ok),
                      std::to_string(at_random.inverse_bound_ok)});
    }
    std::cout << "sense: wrote " << (out_dir / "sense.csv").string() << " and crao.csv\n";
    return 0;
}

// ---- superpose -------------------------------------------------------

int cmd_superpose(const json& cfg, const std::filesystem::path& out_dir) {
    const int n = cfg.at("n_qubits");
    const std::uint64_t seed = cfg.at("seed");
    const int instances = cfg.at("instances");
    const std::vector<int> layer_list = cfg.at("n_layers").get<std::vector<int>>();
    const std::vector<double> dk_list = cfg.at("dk").get<std::vector<double>>();

    json header = cfg;
    header["command"] = "superpose";
    CsvWriter csv(out_dir / "superpose.csv", header,
                  {"k_rs", "k_ts", "cos_angle", "feasible", "delta_c", "m", "dk_rt", "seed"});

    for (int p : layer_list) {
        const NpqcSpec spec(n, p, Variant::FULL);
        const ParamVector theta_r = reference_params(spec);
        for (double dk : dk_list) {
            for (int inst = 0; inst < instances; ++inst) {
                auto rng = make_stream(seed, (static_cast<std::uint64_t>(p) << 40) ^
                                                 (static_cast<std::uint64_t>(inst) << 8) ^
                                                 static_cast<std::uint64_t>(dk * 1e6));
                const ParamVector theta_t =
                    target_params_from(spec, theta_r, 1.0 - dk, rng);
                double dist_rt = 0.0;
                for (std::size_t i = 0; i < theta_r.size(); ++i) {
                    dist_rt += (theta_t[i] - theta_r[i]) * (theta_t[i] - theta_r[i]);
                }
                dist_rt = std::sqrt(dist_rt);

                // random request, sometimes outside the feasible wedge
                std::uniform_real_distribution<double> unif(0.05, 1.0);
                const double k_rs = unif(rng);
                const double k_ts = unif(rng);
                // seeded perpendicular: a generic direction keeps the realized
                // fidelities close to the model for large parameter counts
                SuperposeResult res = solve_superposition(
                    {theta_r, theta_t, k_rs, k_ts},
                    seed ^ (static_cast<std::uint64_t>(p) << 32) ^
                        (static_cast<std::uint64_t>(inst) << 4) ^
                        static_cast<std::uint64_t>(dk * 1e6));
                if (res.feasible) {
                    res = superposition_error(spec, res, {theta_r, theta_t, k_rs, k_ts});
                }
                csv.row({fmt(k_rs), fmt(k_ts), fmt(res.cos_angle),
                         std::to_string(res.feasible), fmt(res.delta_c),
                         std::to_string(spec.num_params()), fmt(dist_rt),
                         std::to_string(seed)});
            }
        }
    }
    std::cout << "superpose: wrote " << (out_dir / "superpose.csv").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NPQC statevector experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_dir = ".";
    app.add_option("--config", config_path, "JSON config file (flags win)")
        ->capture_default_str();

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file (flags win)");
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--threads", threads, "worker threads (does not change results)");
        sub->add_option("--out", out_dir, "output directory");
    };

    // qfim
    auto* qfim_cmd = app.add_subcommand("qfim", "QFIM at a reference or random point");
    int n_qubits = 6, n_layers = 3;
    std::string variant = "full", theta_mode = "reference";
    add_common(qfim_cmd);
    qfim_cmd->add_option("--n", n_qubits, "qubit count (even)");
    qfim_cmd->add_option("--p", n_layers, "layer count");
    qfim_cmd->add_option("--variant", variant, "full | y_only");
    qfim_cmd->add_option("--theta", theta_mode, "reference | random");

    // train
    auto* train_cmd = app.add_subcommand("train", "VQA state learning");
    std::string method = "adaptive", init = "reference";
    double initial_infidelity = 0.9, target_infidelity = 1e-2;
    int n_seeds = 10, max_iters = 100;
    add_common(train_cmd);
    train_cmd->add_option("--n", n_qubits, "qubit count (even)");
    train_cmd->add_option("--p", n_layers, "layer count");
    train_cmd->add_option("--variant", variant, "full | y_only");
    train_cmd->add_option("--method", method, "adaptive | standard | adam");
    train_cmd->add_option("--init", init, "reference | random");
    train_cmd->add_option("--initial-infidelity", initial_infidelity);
    train_cmd->add_option("--target-infidelity", target_infidelity);
    train_cmd->add_option("--instances", n_seeds, "number of random targets");
    train_cmd->add_option("--max-iters", max_iters);

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "single-step infidelity scan + fit");
    std::vector<double> infidelities;
    add_common(scan_cmd);
    scan_cmd->add_option("--n", n_qubits, "qubit count (even)");
    scan_cmd->add_option("--p", n_layers, "layer count");
    scan_cmd->add_option("--variant", variant, "full | y_only");
    scan_cmd->add_option("--init", init, "reference | random");
    scan_cmd->add_option("--instances", n_seeds, "seeds per grid point");
    scan_cmd->add_option("--infidelities", infidelities, "initial infidelity grid");

    // sense
    auto* sense_cmd = app.add_subcommand("sense", "multi-parameter sensing study");
    std::vector<int> layer_list;
    std::vector<double> norms;
    std::vector<long long> shots;
    bool exact = false;
    int instances = 10;
    add_common(sense_cmd);
    sense_cmd->add_option("--n", n_qubits, "qubit count (even)");
    sense_cmd->add_option("--p", layer_list, "layer counts");
    sense_cmd->add_option("--norm", norms, "|dtheta| values");
    sense_cmd->add_option("--shots", shots, "shot budgets");
    sense_cmd->add_flag("--exact", exact, "add the exact-probability row");
    sense_cmd->add_option("--instances", instances);

    // superpose
    auto* superpose_cmd = app.add_subcommand("superpose", "superposition synthesis sweep");
    std::vector<double> dk_list;
    add_common(superpose_cmd);
    superpose_cmd->add_option("--n", n_qubits, "qubit count (even)");
    superpose_cmd->add_option("--p", layer_list, "layer counts");
    superpose_cmd->add_option("--dk", dk_list, "target infidelities dK_t(theta_r)");
    superpose_cmd->add_option("--instances", instances);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        const std::filesystem::path out(out_dir);
        std::filesystem::create_directories(out);

        if (qfim_cmd->parsed()) {
            ConfigMerge merge(config_path,
                              json{{"n_qubits", 6},
                                   {"n_layers", 3},
                                   {"variant", "full"},
                                   {"theta", "reference"},
                                   {"seed", 0}});
            merge.flag(*qfim_cmd, "--n", "n_qubits", n_qubits);
            merge.flag(*qfim_cmd, "--p", "n_layers", n_layers);
            merge.flag(*qfim_cmd, "--variant", "variant", variant);
            merge.flag(*qfim_cmd, "--theta", "theta", theta_mode);
            merge.flag(*qfim_cmd, "--seed", "seed", seed);
            return cmd_qfim(merge.resolved, out);
        }
        if (train_cmd->parsed()) {
            ConfigMerge merge(config_path, json{{"n_qubits", 10},
                                                {"n_layers", 10},
                                                {"variant", "full"},
                                                {"method", "adaptive"},
                                                {"init", "reference"},
                                                {"initial_infidelity", 0.9},
                                                {"target_infidelity", 1e-2},
                                                {"n_seeds", 10},
                                                {"max_iters", 100},
                                                {"adaptive_iters", 3},
                                                {"post_adaptive_rate", 0.5},
                                                {"fixed_rate", 1.0},
                                                {"adam_rate", 0.05},
                                                {"seed", 0}});
            merge.flag(*train_cmd, "--n", "n_qubits", n_qubits);
            merge.flag(*train_cmd, "--p", "n_layers", n_layers);
            merge.flag(*train_cmd, "--variant", "variant", variant);
            merge.flag(*train_cmd, "--method", "method", method);
            merge.flag(*train_cmd, "--init", "init", init);
            merge.flag(*train_cmd, "--initial-infidelity", "initial_infidelity",
                       initial_infidelity);
            merge.flag(*train_cmd, "--target-infidelity", "target_infidelity",
                       target_infidelity);
            merge.flag(*train_cmd, "--instances", "n_seeds", n_seeds);
            merge.flag(*train_cmd, "--max-iters", "max_iters", max_iters);
            merge.flag(*train_cmd, "--seed", "seed", seed);
            return cmd_train(merge.resolved, out);
        }
        if (scan_cmd->parsed()) {
            ConfigMerge merge(config_path,
                              json{{"n_qubits", 10},
                                   {"n_layers", 10},
                                   {"variant", "full"},
                                   {"init", "reference"},
                                   {"n_seeds", 20},
                                   {"infidelities",
                                    std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7,
                                                        0.8, 0.9}},
                                   {"seed", 0}});
            merge.flag(*scan_cmd, "--n", "n_qubits", n_qubits);
            merge.flag(*scan_cmd, "--p", "n_layers", n_layers);
            merge.flag(*scan_cmd, "--variant", "variant", variant);
            merge.flag(*scan_cmd, "--init", "init", init);
            merge.flag(*scan_cmd, "--instances", "n_seeds", n_seeds);
            merge.flag(*scan_cmd, "--infidelities", "infidelities", infidelities);
            merge.flag(*scan_cmd, "--seed", "seed", seed);
            return cmd_scan(merge.resolved, out);
        }
        if (sense_cmd->parsed()) {
            ConfigMerge merge(config_path,
                              json{{"n_qubits", 8},
                                   {"n_layers", std::vector<int>{4}},
                                   {"norms", std::vector<double>{0.1}},
                                   {"shots", std::vector<long long>{100, 1000, 10000}},
                                   {"exact", true},
                                   {"instances", 10},
                                   {"seed", 0}});
            merge.flag(*sense_cmd, "--n", "n_qubits", n_qubits);
            merge.flag(*sense_cmd, "--p", "n_layers", layer_list);
            merge.flag(*sense_cmd, "--norm", "norms", norms);
            merge.flag(*sense_cmd, "--shots", "shots", shots);
            merge.flag(*sense_cmd, "--exact", "exact", exact);
            merge.flag(*sense_cmd, "--instances", "instances", instances);
            merge.flag(*sense_cmd, "--seed", "seed", seed);
            return cmd_sense(merge.resolved, out, threads);
        }
        if (superpose_cmd->parsed()) {
            ConfigMerge merge(config_path, json{{"n_qubits", 10},
                                                {"n_layers", std::vector<int>{10}},
                                                {"dk", std::vector<double>{0.8}},
                                                {"instances", 100},
                                                {"seed", 0}});
            merge.flag(*superpose_cmd, "--n", "n_qubits", n_qubits);
            merge.flag(*superpose_cmd, "--p", "n_layers", layer_list);
            merge.flag(*superpose_cmd, "--dk", "dk", dk_list);
            merge.flag(*superpose_cmd, "--instances", "instances", instances);
            merge.flag(*superpose_cmd, "--seed", "seed", seed);
            return cmd_superpose(merge.resolved, out);
        }
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const DepthError& e) {
        std::cerr << "infeasible spec: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible spec: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
