// Command-line front end: model construction and all analyses as
// subcommands, JSON reports on stdout, machine-readable errors on stderr.
//
// Exit codes: 0 success, 1 usage error, 2 validation failure,
// 3 numerical-integrity failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "susyq/circuits.hpp"
#include "susyq/models.hpp"
#include "susyq/serialize.hpp"
#include "susyq/spectral.hpp"
#include "susyq/susycore.hpp"
#include "susyq/wittenapprox.hpp"

using namespace susyq;
using nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = SUSYQ_VERSION;

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::ostringstream hex;
    hex << "fnv1a64:" << std::hex << fnv1a64(ss.str());
    return hex.str();
}

struct Manifest {
    std::string subcommand;
    ordered_json config = ordered_json::object();
    ordered_json input_digests = ordered_json::object();
    std::optional<std::uint64_t> seed;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void add_input(const std::string& path) { input_digests[path] = file_digest(path); }

    ordered_json finish() const {
        const auto elapsed =
            std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);
        ordered_json m{{"subcommand", subcommand},
                       {"config", config},
                       {"inputs", input_digests},
                       {"tool_version", kToolVersion},
                       {"duration_us", elapsed.count()}};
        if (seed) {
            m["seed"] = *seed;
        } else {
            m["seed"] = nullptr;
        }
        return m;
    }
};

void emit(const Manifest& manifest, const std::string& schema, ordered_json result, bool plain,
          const std::string& plain_text) {
    if (plain) {
        std::cout << plain_text;
        return;
    }
    ordered_json out{{"schema", schema}};
    for (auto& [k, v] : result.items()) out[k] = v;
    out["manifest"] = manifest.finish();
    std::cout << out.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Operator mini-grammar for insertion/circuit flags:
//   identity | parity | hamiltonian | hpen | number:i=I |
//   evolve:t=T (e^{-itH}) | exph:c=RE,IM (e^{cH}) | zq:q=Q,r=R
// ---------------------------------------------------------------------------

std::map<std::string, std::string> parse_kv(const std::string& args, const std::string& spec) {
    std::map<std::string, std::string> kv;
    std::istringstream in(args);
    std::string part;
    while (std::getline(in, part, ',')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad operator argument in '" + spec + "'");
        kv[part.substr(0, eq)] = part.substr(eq + 1);
    }
    return kv;
}

SparseOperator build_operator(const std::string& spec, const SusyModel& model) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string args = (colon == std::string::npos) ? "" : spec.substr(colon + 1);

    if (name == "identity") return SparseOperator::identity(model.dim());
    if (name == "parity") return parity_operator(model.n_modes);
    if (name == "hamiltonian") return hamiltonian(model);
    if (name == "hpen") return penalty_hamiltonian(graph_from_labels(model));
    if (name == "exph") {
        double re = 0.0, im = 0.0;
        if (std::sscanf(args.c_str(), "c=%lf,%lf", &re, &im) != 2) {
            throw std::invalid_argument("exph needs c=RE,IM");
        }
        return hermitian_exp(hamiltonian(model), Complex(re, im));
    }

    const auto kv = parse_kv(args, spec);
    const auto need = [&](const char* key) -> double {
        const auto it = kv.find(key);
        if (it == kv.end()) throw std::invalid_argument("operator '" + name + "' needs " + key + "=...");
        return std::stod(it->second);
    };
    if (name == "number") return number_operator(static_cast<int>(need("i")), model.n_modes);
    if (name == "evolve") return hermitian_exp(hamiltonian(model), Complex(0.0, -need("t")));
    if (name == "zq") return zq_symmetry_operator(model.n_modes, static_cast<int>(need("q")), need("r"));
    throw std::invalid_argument("unknown operator spec '" + name + "'");
}

Insertion parse_insertion(const std::string& text, const SusyModel& model) {
    const auto at = text.rfind('@');
    const std::string spec = (at == std::string::npos) ? text : text.substr(0, at);
    const double time = (at == std::string::npos) ? 0.0 : std::stod(text.substr(at + 1));
    return Insertion{build_operator(spec, model), time};
}

DenseVec parse_state(const std::string& text, const SusyModel& model) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    if (kind == "ground") {
        const int k = (colon == std::string::npos) ? 0 : std::stoi(text.substr(colon + 1));
        const SpectralReport spec = diagonalize(model);
        if (spec.ground_basis.cols() == 0) throw std::domain_error("model has no supersymmetric ground states");
        if (k < 0 || k >= spec.ground_basis.cols()) {
            throw std::invalid_argument("ground state index out of range (have " +
                                        std::to_string(spec.ground_basis.cols()) + ")");
        }
        return spec.ground_basis.col(k);
    }
    if (kind == "basis") {
        if (colon == std::string::npos) throw std::invalid_argument("state spec 'basis' needs an index");
        const long idx = std::stol(text.substr(colon + 1));
        if (idx < 0 || idx >= model.dim()) throw std::invalid_argument("basis state index out of range");
        DenseVec v = DenseVec::Zero(model.dim());
        v(idx) = Complex(1.0, 0.0);
        return v;
    }
    throw std::invalid_argument("unknown state spec '" + text + "' (use ground:K or basis:IDX)");
}

std::vector<SparseOperator> load_b_ops(const std::string& path, int& n_out) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open b-ops file: " + path);
    ordered_json j;
    in >> j;
    n_out = j.at("N").get<int>();
    std::vector<SparseOperator> ops;
    for (const auto& item : j.at("b_ops")) ops.push_back(operator_from_json(item));
    return ops;
}

ordered_json complex_json(Complex z) { return ordered_json{{"re", z.real()}, {"im", z.imag()}}; }

int run(int argc, char** argv) {
    CLI::App app{"Exact simulation toolkit for supersymmetric quantum mechanics on qubits"};
    app.require_subcommand(1);
    bool plain = false;
    app.add_flag("--plain", plain, "human-readable summary instead of JSON");

    // ---- build ----
    auto* build = app.add_subcommand("build", "construct and validate a model, write model JSON");
    build->require_subcommand(1);
    std::string out_path = "model.json";

    auto* b_hc = build->add_subcommand("hardcore", "fermion hard-core model on a graph");
    std::string hc_graph;
    int hc_max_vertices = 20;
    b_hc->add_option("--graph", hc_graph, "edge-list graph file")->required();
    b_hc->add_option("--max-vertices", hc_max_vertices, "size guard (default 20)");
    b_hc->add_option("-o,--output", out_path, "output model file");

    auto* b_syk = build->add_subcommand("syk", "supersymmetric SYK supercharge");
    int syk_n = 0, syk_q = 3;
    std::uint64_t syk_seed = 0;
    std::string syk_couplings;
    auto* syk_seed_opt = b_syk->add_option("--seed", syk_seed, "coupling seed");
    b_syk->add_option("--n", syk_n, "mode count")->required();
    b_syk->add_option("--q", syk_q, "interaction order (odd)")->required();
    b_syk->add_option("--couplings", syk_couplings, "JSON file with explicit couplings");
    b_syk->add_option("-o,--output", out_path, "output model file");

    auto* b_ansatz = build->add_subcommand("ansatz", "Q = sum a_i† B_i from a B-operator file");
    std::string ansatz_bops;
    b_ansatz->add_option("--b-ops", ansatz_bops, "JSON file {N, b_ops: [...]}")->required();
    b_ansatz->add_option("-o,--output", out_path, "output model file");

    auto* b_jordan = build->add_subcommand("jordan", "nilpotent Jordan-form supercharge from a partition");
    std::string jordan_partition;
    std::string jordan_conjugator;
    b_jordan->add_option("--partition", jordan_partition, "\"n2,n1\" with 2*n2 + n1 = 2^N")->required();
    b_jordan->add_option("--conjugator", jordan_conjugator, "operator JSON file for S");
    b_jordan->add_option("-o,--output", out_path, "output model file");

    // ---- analyses ----
    auto* c_validate = app.add_subcommand("validate", "run the SUSY algebra checks on a model file");
    std::string model_path;
    double val_tol = 1e-12;
    c_validate->add_option("--model", model_path, "model JSON file")->required();
    c_validate->add_option("--tolerance", val_tol, "validation tolerance (default 1e-12)");

    auto* c_spectrum = app.add_subcommand("spectrum", "exact spectrum on the projected space");
    std::string spec_model;
    double spec_tol = 1e-10;
    std::int64_t spec_cap = 1 << 12;
    c_spectrum->add_option("--model", spec_model, "model JSON file")->required();
    c_spectrum->add_option("--tolerance", spec_tol, "zero-energy threshold (default 1e-10)");
    c_spectrum->add_option("--dense-cap", spec_cap, "max projected dimension (default 4096)");

    auto* c_witten = app.add_subcommand("witten", "Witten index via Tr[P(-1)^F]");
    std::string witten_model;
    c_witten->add_option("--model", witten_model, "model JSON file")->required();

    auto* c_euler = app.add_subcommand("euler", "independence-complex Euler characteristic of a graph");
    std::string euler_graph;
    c_euler->add_option("--graph", euler_graph, "edge-list graph file")->required();

    auto* c_gwitten = app.add_subcommand("gwitten", "generalized Witten index with insertions");
    std::string gw_model;
    std::vector<std::string> gw_insertions;
    c_gwitten->add_option("--model", gw_model, "model JSON file")->required();
    c_gwitten->add_option("--insert", gw_insertions, "insertion SPEC@TAU (repeatable)");

    auto* c_correlator = app.add_subcommand("correlator", "ground-state correlator of insertions");
    std::string corr_model;
    std::vector<std::string> corr_insertions;
    c_correlator->add_option("--model", corr_model, "model JSON file")->required();
    c_correlator->add_option("--insert", corr_insertions, "insertion SPEC@T (repeatable)");

    auto* c_hadamard = app.add_subcommand("hadamard", "supersymmetric Hadamard test");
    std::string had_model, had_op = "identity", had_state = "ground:0", had_part = "real";
    std::uint64_t had_shots = 0, had_seed = 0;
    c_hadamard->add_option("--model", had_model, "model JSON file")->required();
    c_hadamard->add_option("--op", had_op, "operator spec (default identity)");
    c_hadamard->add_option("--state", had_state, "ground:K or basis:IDX (default ground:0)");
    c_hadamard->add_option("--part", had_part, "real|imag (default real)");
    c_hadamard->add_option("--shots", had_shots, "also shot-sample with this many shots");
    c_hadamard->add_option("--seed", had_seed, "sampling seed");

    auto* c_trace = app.add_subcommand("trace", "one-clean-qubit trace estimation");
    std::string tr_model, tr_op = "identity", tr_norm = "full";
    int tr_n = 0;
    std::uint64_t tr_shots = 0, tr_seed = 0;
    c_trace->add_option("--model", tr_model, "model JSON file");
    c_trace->add_option("--n", tr_n, "mode count for the P = I model (alternative to --model)");
    c_trace->add_option("--op", tr_op, "operator spec (default identity)");
    c_trace->add_option("--normalization", tr_norm, "full|projected (default full)");
    c_trace->add_option("--shots", tr_shots, "also shot-sample with this many shots");
    c_trace->add_option("--seed", tr_seed, "sampling seed");

    auto* c_approx = app.add_subcommand("approx", "additive approximation of the hard-core index");
    std::string ap_model;
    double ap_mu = 0.0, ap_eps = 0.1, ap_conf = 0.9;
    double ap_gamma = -1.0;
    std::int64_t ap_shots = -1;
    std::uint64_t ap_seed = 0;
    c_approx->add_option("--model", ap_model, "hardcore model JSON file")->required();
    c_approx->add_option("--mu", ap_mu, "chemical potential (default 0)");
    c_approx->add_option("--epsilon", ap_eps, "additive accuracy (default 0.1)");
    c_approx->add_option("--confidence", ap_conf, "success probability in (1/2,1) (default 0.9)");
    c_approx->add_option("--gamma", ap_gamma, "penalty strength override (default log(2/epsilon))");
    c_approx->add_option("--shots", ap_shots, "shot-count override");
    c_approx->add_option("--seed", ap_seed, "sampling seed (default 0)");

    auto* c_sykindex = app.add_subcommand("sykindex", "refined SYK index closed form");
    int si_n = 0, si_q = 3;
    double si_r = 1.0;
    bool si_compare = false;
    c_sykindex->add_option("--n", si_n, "mode count")->required();
    c_sykindex->add_option("--q", si_q, "Z_q order")->required();
    c_sykindex->add_option("--r", si_r, "chemical potential r (default 1)");
    c_sykindex->add_flag("--compare-brute", si_compare, "also evaluate the brute-force trace");

    // Let global flags like --plain appear after the subcommand.
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
        sub->fallthrough();
        for (CLI::App* nested : sub->get_subcommands([](const CLI::App*) { return true; })) {
            nested->fallthrough();
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << ordered_json{{"error", {{"type", "usage"}, {"message", e.what()}}}}.dump() << "\n";
        return 1;
    }

    Manifest manifest;

    // ---- build ----
    if (build->parsed()) {
        SusyModel model;
        if (b_hc->parsed()) {
            manifest.subcommand = "build.hardcore";
            manifest.add_input(hc_graph);
            manifest.config = {{"graph", hc_graph}, {"max_vertices", hc_max_vertices}, {"output", out_path}};
            model = hardcore_model(load_graph_file(hc_graph), hc_max_vertices);
        } else if (b_syk->parsed()) {
            manifest.subcommand = "build.syk";
            manifest.config = {{"n", syk_n}, {"q", syk_q}, {"output", out_path}};
            SykCoupling coupling;
            if (!syk_couplings.empty()) {
                manifest.add_input(syk_couplings);
                manifest.config["couplings"] = syk_couplings;
                std::ifstream in(syk_couplings);
                if (!in) throw std::invalid_argument("cannot open couplings file: " + syk_couplings);
                ordered_json j;
                in >> j;
                coupling.n_modes = syk_n;
                coupling.q = syk_q;
                for (const auto& row : j.at("couplings")) {
                    std::vector<int> idx;
                    for (const auto& v : row.at("modes")) idx.push_back(v.get<int>());
                    coupling.table.emplace_back(idx,
                                                Complex(row.at("re").get<double>(), row.at("im").get<double>()));
                }
            } else {
                if (syk_seed_opt->count() == 0) {
                    throw std::invalid_argument("build syk needs --seed or --couplings");
                }
                manifest.seed = syk_seed;
                coupling = random_syk_coupling(syk_n, syk_q, syk_seed);
            }
            model = syk_model(coupling);
        } else if (b_ansatz->parsed()) {
            manifest.subcommand = "build.ansatz";
            manifest.add_input(ansatz_bops);
            manifest.config = {{"b_ops", ansatz_bops}, {"output", out_path}};
            int n = 0;
            const auto ops = load_b_ops(ansatz_bops, n);
            const AnsatzResult res = ansatz_supercharge(n, ops);
            model = res.model;
        } else if (b_jordan->parsed()) {
            manifest.subcommand = "build.jordan";
            manifest.config = {{"partition", jordan_partition}, {"output", out_path}};
            long n_two = 0, n_one = 0;
            if (std::sscanf(jordan_partition.c_str(), "%ld,%ld", &n_two, &n_one) != 2) {
                throw std::invalid_argument("--partition must be \"n2,n1\"");
            }
            const NilpotentPartition part{n_two, n_one};
            std::optional<SparseOperator> s;
            if (!jordan_conjugator.empty()) {
                manifest.add_input(jordan_conjugator);
                manifest.config["conjugator"] = jordan_conjugator;
                std::ifstream in(jordan_conjugator);
                if (!in) throw std::invalid_argument("cannot open conjugator file: " + jordan_conjugator);
                ordered_json j;
                in >> j;
                s = operator_from_json(j);
            }
            model = jordan_model(part, s ? &*s : nullptr);
            const auto [parity_ok, parity_res] = check_parity_anticommutation(model.supercharge);
            if (!parity_ok) {
                throw ValidationError("conjugated supercharge fails {(-1)^F, Q} = 0 (residual " +
                                      std::to_string(parity_res) + ")");
            }
        }

        const ValidationReport report = validate(model);
        if (!report.passed) {
            std::cerr << ordered_json{{"error",
                                       {{"type", "validation"},
                                        {"message", "constructed model failed validation"},
                                        {"report", validation_to_json(report)}}}}
                             .dump()
                      << "\n";
            return 2;
        }
        ordered_json doc = model_to_json(model);
        doc["validation"] = validation_to_json(report);
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot write output file: " + out_path);
        out << doc.dump(2) << "\n";

        std::ostringstream plain_text;
        plain_text << "model written to " << out_path << " (N = " << model.n_modes
                   << ", validation passed)\n";
        emit(manifest, "susyq/build-report/v1",
             ordered_json{{"output", out_path},
                          {"N", model.n_modes},
                          {"projected_dim", model.projector.trace().real()},
                          {"validation", validation_to_json(report)}},
             plain, plain_text.str());
        return 0;
    }

    // ---- analyses ----
    if (c_validate->parsed()) {
        manifest.subcommand = "validate";
        manifest.add_input(model_path);
        manifest.config = {{"model", model_path}, {"tolerance", val_tol}};
        const SusyModel model = load_model_file(model_path);
        const ValidationReport report = validate(model, val_tol);
        std::ostringstream plain_text;
        plain_text << "validation " << (report.passed ? "PASSED" : "FAILED") << " (max residual "
                   << report.max_residual() << ")\n";
        emit(manifest, "susyq/validation-report/v1", ordered_json{{"validation", validation_to_json(report)}},
             plain, plain_text.str());
        return report.passed ? 0 : 2;
    }

    if (c_spectrum->parsed()) {
        manifest.subcommand = "spectrum";
        manifest.add_input(spec_model);
        manifest.config = {{"model", spec_model}, {"tolerance", spec_tol}, {"dense_cap", spec_cap}};
        const SusyModel model = load_model_file(spec_model);
        const SpectralReport report = diagonalize(model, spec_tol, spec_cap);
        std::ostringstream plain_text;
        plain_text << "projected dim " << report.projected_dim() << ", n_B = " << report.n_bosonic_ground
                   << ", n_F = " << report.n_fermionic_ground << ", Witten index " << report.witten_index
                   << "\n";
        emit(manifest, "susyq/spectral-report/v1", ordered_json{{"spectrum", spectral_to_json(report)}},
             plain, plain_text.str());
        return 0;
    }

    if (c_witten->parsed()) {
        manifest.subcommand = "witten";
        manifest.add_input(witten_model);
        manifest.config = {{"model", witten_model}};
        const SusyModel model = load_model_file(witten_model);
        require_valid(model);
        const long long index = witten_index(model);
        emit(manifest, "susyq/witten-report/v1", ordered_json{{"witten_index", index}}, plain,
             "Witten index " + std::to_string(index) + "\n");
        return 0;
    }

    if (c_euler->parsed()) {
        manifest.subcommand = "euler";
        manifest.add_input(euler_graph);
        manifest.config = {{"graph", euler_graph}};
        const Graph g = load_graph_file(euler_graph);
        const long long chi = independence_euler_characteristic(g);
        const auto sets = independent_sets(g);
        emit(manifest, "susyq/euler-report/v1",
             ordered_json{{"euler_characteristic", chi}, {"independent_sets", sets.size()}}, plain,
             "chi = " + std::to_string(chi) + " over " + std::to_string(sets.size()) + " independent sets\n");
        return 0;
    }

    if (c_gwitten->parsed()) {
        manifest.subcommand = "gwitten";
        manifest.add_input(gw_model);
        manifest.config = {{"model", gw_model}, {"insertions", gw_insertions}};
        const SusyModel model = load_model_file(gw_model);
        std::vector<Insertion> insertions;
        for (const auto& text : gw_insertions) insertions.push_back(parse_insertion(text, model));
        std::vector<std::string> warnings;
        const Complex z = generalized_witten(model, insertions, &warnings);
        std::ostringstream plain_text;
        plain_text << "Z_P = " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i\n";
        emit(manifest, "susyq/gwitten-report/v1",
             ordered_json{{"value", complex_json(z)}, {"warnings", warnings}}, plain, plain_text.str());
        return 0;
    }

    if (c_correlator->parsed()) {
        manifest.subcommand = "correlator";
        manifest.add_input(corr_model);
        manifest.config = {{"model", corr_model}, {"insertions", corr_insertions}};
        const SusyModel model = load_model_file(corr_model);
        std::vector<Insertion> insertions;
        for (const auto& text : corr_insertions) insertions.push_back(parse_insertion(text, model));
        const CorrelatorResult res = ground_correlator(model, insertions);
        ordered_json per = ordered_json::array();
        for (Complex v : res.per_ground_state) per.push_back(complex_json(v));
        std::ostringstream plain_text;
        plain_text << res.per_ground_state.size() << " ground state(s), average correlator "
                   << res.average.real() << " + " << res.average.imag() << "i\n";
        emit(manifest, "susyq/correlator-report/v1",
             ordered_json{{"per_ground_state", per}, {"average", complex_json(res.average)}}, plain,
             plain_text.str());
        return 0;
    }

    if (c_hadamard->parsed()) {
        manifest.subcommand = "hadamard";
        manifest.add_input(had_model);
        manifest.config = {{"model", had_model},
                           {"op", had_op},
                           {"state", had_state},
                           {"part", had_part},
                           {"shots", had_shots}};
        if (had_shots > 0) manifest.seed = had_seed;
        const SusyModel model = load_model_file(had_model);
        const SparseOperator op = build_operator(had_op, model);
        const DenseVec state = parse_state(had_state, model);
        AncillaPart part;
        if (had_part == "real") {
            part = AncillaPart::Real;
        } else if (had_part == "imag") {
            part = AncillaPart::Imaginary;
        } else {
            throw std::invalid_argument("--part must be real or imag");
        }
        const double p0 = hadamard_test_exact(state, op, part);
        ordered_json result{{"p0_exact", p0}};
        std::ostringstream plain_text;
        plain_text << "exact p0 = " << p0;
        if (had_shots > 0) {
            const SampleRecord rec = hadamard_test_sample(state, op, had_shots, had_seed, part);
            result["sample"] = sample_to_json(rec);
            plain_text << ", sampled p0_hat = " << rec.p0_hat << " +- " << rec.ci95_halfwidth;
        }
        plain_text << "\n";
        emit(manifest, "susyq/hadamard-report/v1", result, plain, plain_text.str());
        return 0;
    }

    if (c_trace->parsed()) {
        manifest.subcommand = "trace";
        manifest.config = {{"op", tr_op}, {"normalization", tr_norm}, {"shots", tr_shots}};
        if (tr_shots > 0) manifest.seed = tr_seed;
        SusyModel model;
        if (!tr_model.empty()) {
            manifest.add_input(tr_model);
            manifest.config["model"] = tr_model;
            model = load_model_file(tr_model);
        } else if (tr_n > 0) {
            manifest.config["n"] = tr_n;
            model.n_modes = tr_n;
            model.supercharge = SparseOperator::zero(Index(1) << tr_n, OpParity::Fermionic);
            model.projector = SparseOperator::identity(Index(1) << tr_n);
        } else {
            throw std::invalid_argument("trace needs --model or --n");
        }
        Normalization norm;
        if (tr_norm == "full") {
            norm = Normalization::FullSpace;
        } else if (tr_norm == "projected") {
            norm = Normalization::Projected;
        } else {
            throw std::invalid_argument("--normalization must be full or projected");
        }
        const SparseOperator op = build_operator(tr_op, model);
        const double p0 = trace_estimation_exact(model, op, norm);
        ordered_json result{{"p0_exact", p0}};
        std::ostringstream plain_text;
        plain_text << "exact p0 = " << p0;
        if (tr_shots > 0) {
            const SampleRecord rec = trace_estimation_sample(model, op, tr_shots, tr_seed, norm);
            result["sample"] = sample_to_json(rec);
            plain_text << ", sampled p0_hat = " << rec.p0_hat << " +- " << rec.ci95_halfwidth;
        }
        plain_text << "\n";
        emit(manifest, "susyq/trace-report/v1", result, plain, plain_text.str());
        return 0;
    }

    if (c_approx->parsed()) {
        manifest.subcommand = "approx";
        manifest.add_input(ap_model);
        manifest.seed = ap_seed;
        manifest.config = {{"model", ap_model}, {"mu", ap_mu},       {"epsilon", ap_eps},
                           {"confidence", ap_conf}, {"gamma", ap_gamma}, {"shots", ap_shots}};
        const SusyModel model = load_model_file(ap_model);
        ApproxConfig cfg;
        cfg.mu = ap_mu;
        cfg.epsilon = ap_eps;
        cfg.confidence = ap_conf;
        if (ap_gamma > 0.0) cfg.gamma = ap_gamma;
        std::optional<std::uint64_t> shots;
        if (ap_shots >= 0) shots = static_cast<std::uint64_t>(ap_shots);

        const EstimateResult est = witten_additive_estimate(model, cfg, shots, ap_seed);
        const GapReport gap = approximation_gap_report(model, cfg);
        const double normalization = static_cast<double>(model.dim()) * std::exp(cfg.mu * gap.lambda_used);

        ordered_json result{{"z_hat", complex_json(est.z_hat)},
                            {"exact_z", complex_json(gap.z_exact)},
                            {"exact_z_normalized", complex_json(gap.z_exact / normalization)},
                            {"gap", gap.normalized_gap},
                            {"shots", est.shots_used},
                            {"guarantee",
                             {{"met", est.guarantee_met},
                              {"required_shots", est.required_shots},
                              {"achieved_halfwidth", est.achieved_halfwidth},
                              {"range_bound", est.range_bound},
                              {"epsilon", cfg.epsilon},
                              {"confidence", cfg.confidence},
                              {"gamma", gap.gamma_used},
                              {"lambda", gap.lambda_used}}}};
        std::ostringstream plain_text;
        plain_text << "z_hat = " << est.z_hat.real() << " (exact normalized "
                   << (gap.z_exact / normalization).real() << "), " << est.shots_used << " shots\n";
        emit(manifest, "susyq/approx-report/v1", result, plain, plain_text.str());
        return 0;
    }

    if (c_sykindex->parsed()) {
        manifest.subcommand = "sykindex";
        manifest.config = {{"n", si_n}, {"q", si_q}, {"r", si_r}, {"compare_brute", si_compare}};
        const Complex closed = syk_refined_index_closed_form(si_n, si_q, si_r);
        ordered_json result{{"closed_form", complex_json(closed)}};
        std::ostringstream plain_text;
        plain_text << "closed form = " << closed.real() << " + " << closed.imag() << "i";
        if (si_compare) {
            const Complex brute = mul(parity_operator(si_n), zq_symmetry_operator(si_n, si_q, si_r)).trace();
            const double diff = std::abs(brute - closed) / std::max(1.0, std::abs(closed));
            result["brute_force"] = complex_json(brute);
            result["relative_diff"] = diff;
            plain_text << ", brute force = " << brute.real() << " + " << brute.imag() << "i";
            if (diff > 1e-9) {
                std::cerr << ordered_json{{"error",
                                           {{"type", "numerical-integrity"},
                                            {"message", "closed form and brute force disagree"},
                                            {"relative_diff", diff}}}}
                                 .dump()
                          << "\n";
                return 3;
            }
        }
        plain_text << "\n";
        emit(manifest, "susyq/sykindex-report/v1", result, plain, plain_text.str());
        return 0;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ValidationError& e) {
        std::cerr << ordered_json{{"error", {{"type", "validation"}, {"message", e.what()}}}}.dump() << "\n";
        return 2;
    } catch (const NumericalIntegrityError& e) {
        std::cerr << ordered_json{{"error", {{"type", "numerical-integrity"}, {"message", e.what()}}}}.dump()
                  << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << ordered_json{{"error", {{"type", "domain"}, {"message", e.what()}}}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << ordered_json{{"error", {{"type", "usage"}, {"message", e.what()}}}}.dump() << "\n";
        return 1;
    }
}
