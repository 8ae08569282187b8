// Experiment runner: modgauss run --config cfg.json [--seed S] [--threads N] [--out DIR] [--pipeline P]
//                    modgauss catalog

#include "modgauss/io.hpp"
#include "modgauss/stats.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace modgauss;
using io::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::vector<std::string> kPipelines = {"density", "cumulants", "clt", "concentration", "tails", "oracle-tv", "mc1"};

std::string catalog_text() {
    std::ostringstream os;
    os << "models:\n"
       << "  graphon:constant      {\"family\":\"graphon\",\"variant\":\"constant\",\"p\":\"1/2\"}\n"
       << "  graphon:step          masses [..], symmetric values [[..]]\n"
       << "  graphon:product       g(x,y) = xy\n"
       << "  graphon:mean          g(x,y) = (x+y)/2\n"
       << "  graphon:grid          m x m values, interpolation constant|bilinear\n"
       << "  graphon:graph         step function of a finite graph (\"graph\": \"k=3; 1-2\")\n"
       << "  permuton:uniform\n"
       << "  permuton:from_permutation  \"sigma\": \"2413\"\n"
       << "  permuton:grid         m x m cell masses with uniform marginals\n"
       << "  permuton:disc\n"
       << "  thoma                 \"alpha\": [..], \"beta\": [..]; variant plancherel; or \"partition\"\n"
       << "observables:\n"
       << "  graph                 \"k=3; 1-2,2-3,1-3\", or K2, K3, P3\n"
       << "  permutation           \"21\", \"231\", \"2,4,1,3\"\n"
       << "  partition             \"2\", \"3,1\"\n"
       << "  formal sums           {\"family\": ..., \"sum\": {\"key\": \"coef\"}} (density pipeline)\n"
       << "pipelines:\n";
    for (const auto& p : kPipelines) os << "  " << p << "\n";
    return os.str();
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
    return h;
}

std::string timestamp() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream os;
    os << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
}

struct Run {
    json cfg;
    std::string pipeline;
    ModelSpec model;
    std::vector<int> ns;
    long long reps = 0;
    std::uint64_t seed = 0;
    int threads = 1;
    fs::path out;
    json report;
    std::ostringstream samples, tails;
    bool pass = true;

    Basis basis() const {
        const auto& o = cfg.at("observable");
        if (o.contains("sum")) throw UsageError("pipeline '" + pipeline + "' needs a single basis object");
        auto b = io::basis_of(o.at("family"), o.at("value"));
        check_family(model, b);
        return b;
    }

    double threshold(const char* name, double fallback) const {
        return cfg.contains("thresholds") ? cfg["thresholds"].value(name, fallback) : fallback;
    }

    void need_reps(long long minimum) const {
        if (reps < minimum) throw UsageError("pipeline '" + pipeline + "' needs reps >= " + std::to_string(minimum));
    }

    // f(M_n) = S_n / N_n.
    double density_center(const Basis& b, int n) const {
        switch (model.index()) {
            case 0: return expected_hom_density(std::get<Graph>(b), std::get<GraphonSpec>(model), n);
            case 1: return evaluate(Observable(PermSum(std::get<Permutation>(b))), model).value;
            default: return to_double(thoma_density(std::get<Partition>(b), std::get<ThomaParameter>(model)));
        }
    }

    void density() {
        Observable obs = io::observable_of(cfg.at("observable"));
        if (obs.index() != model.index()) throw UsageError("observable and model families differ");
        auto e = evaluate(obs, model);
        report["value"] = e.value;
        if (e.exact) report["exact"] = to_string(*e.exact);
        if (e.stderr_ > 0) report["stderr"] = e.stderr_;
    }

    void cumulants() {
        need_reps(1000);
        auto b = basis();
        json per_n = json::array();
        for (int n : ns) {
            auto r = mc_cumulants(model, b, n, reps, seed, threads);
            json j = io::to_json(r);
            j["n"] = n;
            per_n.push_back(j);
        }
        report["results"] = per_n;
    }

    void clt() {
        need_reps(1000);
        auto b = basis();
        const double dmax = threshold("kolmogorov", 1.0);
        auto [sigma2, L] = formal_limits(model, b, false);
        json per_n = json::array();
        samples << "n,replicate,S,Y\n";
        for (int n : ns) {
            auto s = sample_statistic(model, b, n, reps, seed, threads);
            auto y = standardize_y(s);
            const double d = kolmogorov_distance(y.values);
            auto g = regime_for(b, n);
            auto k = k_statistics(s);
            const double sigma_n = std::sqrt((sigma2 && *sigma2 > 0 ? *sigma2 : k.k2 / to_double(g.N * g.D)));
            json j{{"n", n}, {"d_kol", d}, {"threshold", dmax}};
            bool ok = d <= dmax;
            if (sigma_n > 0) {
                const double bound = kolmogorov_bound(g, sigma_n);
                j["kolmogorov_bound"] = bound;
                ok = ok && d <= bound;
            } else {
                j["kolmogorov_bound"] = nullptr;
                j["singular"] = true;
            }
            j["pass"] = ok;
            pass = pass && ok;
            per_n.push_back(j);
            for (std::size_t i = 0; i < s.size(); ++i) samples << n << "," << i << "," << fmt(s[i]) << "," << fmt(y.values[i]) << "\n";
        }
        report["results"] = per_n;
    }

    void concentration() {
        need_reps(10000);
        auto b = basis();
        const int k = basis_size(b);
        std::vector<double> xs = cfg.value("x_grid", std::vector<double>{0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 1.5});
        const double prefactor = model.index() == 2 ? 4.0 : 2.0;
        json per_n = json::array();
        tails << "n,x,exceed,reps,empirical,upper99,bound\n";
        for (int n : ns) {
            auto s = sample_statistic(model, b, n, reps, seed, threads);
            const double N = to_double(regime_for(b, n).N);
            for (auto& v : s) v /= N;
            const double center = density_center(b, n);
            auto rep = concentration_check(s, center, n, k, xs, prefactor);
            json rows = json::array();
            for (const auto& r : rep.rows) {
                rows.push_back({{"x", r.x}, {"exceed", r.exceed}, {"empirical", r.empirical}, {"upper99", r.upper},
                                {"bound", r.bound}, {"pass", r.pass}});
                tails << n << "," << r.x << "," << r.exceed << "," << r.reps << "," << fmt(r.empirical) << ","
                      << fmt(r.upper) << "," << fmt(r.bound) << "\n";
            }
            per_n.push_back({{"n", n}, {"center", center}, {"prefactor", prefactor}, {"rows", rows}, {"pass", rep.pass}});
            pass = pass && rep.pass;
        }
        report["results"] = per_n;
    }

    void tail_pipeline() {
        need_reps(1000);
        auto b = basis();
        auto [sigma2, L] = formal_limits(model, b, true);
        if (!sigma2 || !L) throw UsageError("tails: formal limits are not available for this model");
        json per_n = json::array();
        tails << "n,y,empirical,upper99,gaussian,corrected\n";
        for (int n : ns) {
            auto s = sample_statistic(model, b, n, reps, seed, threads);
            auto rep = tail_report(standardize_y(s), *sigma2, *L, regime_for(b, n));
            for (const auto& r : rep.rows)
                tails << n << "," << r.x << "," << fmt(r.empirical) << "," << fmt(r.upper) << "," << fmt(r.gaussian) << ","
                      << fmt(r.corrected) << "\n";
            per_n.push_back({{"n", n}, {"skewness", rep.skewness}, {"skewness_se", rep.skewness_se},
                             {"L", rep.L}, {"sigma2", *sigma2}, {"skewness_check", rep.skewness_check}, {"pass", rep.pass}});
            pass = pass && rep.pass;
        }
        report["results"] = per_n;
    }

    void oracle_tv() {
        need_reps(1000);
        const double thr = threshold("tv", 0.02);
        json per_n = json::array();
        for (int n : ns) {
            TVResult r;
            if (const auto* w = std::get_if<ThomaParameter>(&model)) {
                std::vector<Partition> draws(reps);
                parallel_for(reps, threads, [&](long long i) {
                    draws[i] = sample_partition(*w, n, RngSeed{seed, static_cast<std::uint64_t>(i)});
                });
                std::map<Partition, long long> counts;
                for (const auto& p : draws) ++counts[p];
                r = tv_test(counts, exact_central_measure(*w, n), thr);
            } else if (const auto* p = std::get_if<PermutonSpec>(&model)) {
                if (p->kind != PermutonSpec::Kind::Uniform || n > 7)
                    throw UsageError("oracle-tv: permutons need the uniform spec and n <= 7");
                std::vector<Permutation> draws(reps);
                parallel_for(reps, threads, [&](long long i) {
                    draws[i] = sample_permutation(*p, n, RngSeed{seed, static_cast<std::uint64_t>(i)});
                });
                std::map<Permutation, long long> counts;
                for (const auto& s : draws) ++counts[s];
                std::map<Permutation, Rational> exact;
                for (const auto& s : all_permutations(n)) exact[s] = Rational(1, factorial(n));
                r = tv_test(counts, exact, thr);
            } else {
                const auto& g = std::get<GraphonSpec>(model);
                std::vector<Graph> draws(reps);
                parallel_for(reps, threads, [&](long long i) {
                    draws[i] = sample_graph(g, n, RngSeed{seed, static_cast<std::uint64_t>(i)});
                });
                std::map<Graph, long long> counts;
                for (const auto& s : draws) ++counts[s];
                r = tv_test(counts, exact_graph_law(g, n), thr);
            }
            per_n.push_back({{"n", n}, {"tv", r.tv}, {"threshold", thr}, {"pass", r.pass}});
            pass = pass && r.pass;
        }
        report["results"] = per_n;
    }

    void mc1() {
        auto b = basis();
        const int R = cfg.value("R", 4);
        json per_n = json::array();
        for (int n : ns) {
            auto rep = exact_cumulants(model, b, n, R);
            json rows = json::array();
            bool ok = true;
            for (const auto& row : mc1_check(rep)) {
                rows.push_back({{"r", row.r}, {"abs_kappa", to_string(row.abs_kappa)}, {"bound", to_string(row.bound)},
                                {"pass", row.pass}});
                ok = ok && row.pass;
            }
            json j = io::to_json(rep);
            j["n"] = n;
            j["mc1"] = rows;
            j["pass"] = ok;
            per_n.push_back(j);
            pass = pass && ok;
        }
        report["results"] = per_n;
    }

    void execute() {
        if (pipeline == "density") density();
        else if (pipeline == "cumulants") cumulants();
        else if (pipeline == "clt") clt();
        else if (pipeline == "concentration") concentration();
        else if (pipeline == "tails") tail_pipeline();
        else if (pipeline == "oracle-tv") oracle_tv();
        else if (pipeline == "mc1") mc1();
        else throw UsageError("unknown pipeline '" + pipeline + "'");
    }
};

int run(const std::string& config_path, std::optional<std::uint64_t> seed, int threads, const std::string& out,
        const std::string& pipeline) {
    Run r;
    try {
        std::ifstream in(config_path);
        if (!in) throw UsageError("cannot read config '" + config_path + "'");
        try {
            r.cfg = json::parse(in);
        } catch (const json::parse_error& e) {
            throw UsageError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!pipeline.empty()) r.cfg["pipeline"] = pipeline;
        if (seed) r.cfg["seed"] = *seed;
        r.pipeline = r.cfg.value("pipeline", std::string());
        if (std::find(kPipelines.begin(), kPipelines.end(), r.pipeline) == kPipelines.end())
            throw UsageError("unknown or missing pipeline '" + r.pipeline + "'");
        r.model = io::model_of(r.cfg.at("model"));
        if (r.cfg.contains("n")) {
            const auto& n = r.cfg["n"];
            r.ns = n.is_array() ? n.get<std::vector<int>>() : std::vector<int>{n.get<int>()};
        }
        if (r.ns.empty() && r.pipeline != "density") throw UsageError("config needs \"n\"");
        r.reps = r.cfg.value("reps", 0LL);
        r.seed = r.cfg.value("seed", std::uint64_t{0});
        r.threads = threads;
        r.out = out.empty() ? fs::path(r.cfg.value("output", std::string("out"))) : fs::path(out);
    } catch (const UsageError& e) {
        std::cerr << "modgauss: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "modgauss: invalid config: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "modgauss: invalid config: " << e.what() << "\n";
        return 2;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        r.execute();
    } catch (const UsageError& e) {
        std::cerr << "modgauss: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "modgauss: " << e.what() << "\n";
        return 2;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    fs::create_directories(r.out);
    const std::string stamp = timestamp();
    json report;
    report["generated_at"] = stamp;
    report["version"] = kVersion;
    report["config_hash"] = fnv1a(r.cfg.dump());
    report["config"] = r.cfg;
    report["seed"] = r.seed;
    report["pipeline"] = r.pipeline;
    report["model"] = io::to_json(r.model);
    report["wall_seconds"] = wall;
    report["pass"] = r.pass;
    for (auto& [k, v] : r.report.items()) report[k] = v;
    std::ofstream(r.out / "report.json") << report.dump(2) << "\n";
    auto header = [&](std::ostream& os) {
        os << "# modgauss " << kVersion << " generated_at=" << stamp << " seed=" << r.seed << " config_hash=" << fnv1a(r.cfg.dump())
           << "\n";
    };
    if (!r.samples.str().empty()) {
        std::ofstream f(r.out / "samples.csv");
        header(f);
        f << r.samples.str();
    }
    if (!r.tails.str().empty()) {
        std::ofstream f(r.out / "tails.csv");
        header(f);
        f << r.tails.str();
    }
    std::cout << r.pipeline << ": " << (r.pass ? "pass" : "FAIL") << " (" << (r.out / "report.json").string() << ")\n";
    return r.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mod-Gaussian experiments for graphs, permutations and partitions"};
    app.require_subcommand(1);
    auto* run_cmd = app.add_subcommand("run", "Run a pipeline from a JSON config");
    std::string config, out, pipeline;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    run_cmd->add_option("--config", config, "Config file (JSON)")->required();
    run_cmd->add_option("--seed", seed, "Override the config seed");
    run_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    run_cmd->add_option("--out", out, "Output directory");
    run_cmd->add_option("--pipeline", pipeline, "Override the config pipeline");
    app.add_subcommand("catalog", "List models, observables and pipelines");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (app.got_subcommand("catalog")) {
        std::cout << catalog_text();
        return 0;
    }
    return run(config, seed, threads, out, pipeline);
}
