#include "susyq/serialize.hpp"

#include <fstream>
#include <sstream>

namespace susyq {

using nlohmann::ordered_json;

namespace {

OpParity parity_from_string(const std::string& s) {
    if (s == "bosonic") return OpParity::Bosonic;
    if (s == "fermionic") return OpParity::Fermionic;
    if (s == "mixed") return OpParity::Mixed;
    if (s == "unknown") return OpParity::Unknown;
    throw std::invalid_argument("unknown operator parity tag: " + s);
}

}  // namespace

ordered_json operator_to_json(const SparseOperator& op) {
    ordered_json entries = ordered_json::array();
    for (const auto& t : op.triplets()) {
        entries.push_back({t.row(), t.col(), t.value().real(), t.value().imag()});
    }
    return ordered_json{{"dim", op.dim()}, {"parity", to_string(op.parity_tag())}, {"entries", entries}};
}

SparseOperator operator_from_json(const ordered_json& j) {
    const Index dim = j.at("dim").get<Index>();
    OpParity tag = OpParity::Unknown;
    if (j.contains("parity")) tag = parity_from_string(j.at("parity").get<std::string>());
    std::vector<Eigen::Triplet<Complex>> entries;
    for (const auto& e : j.at("entries")) {
        if (!e.is_array() || e.size() != 4) throw std::invalid_argument("operator entry must be [row, col, re, im]");
        const Index row = e[0].get<Index>();
        const Index col = e[1].get<Index>();
        if (row < 0 || row >= dim || col < 0 || col >= dim) {
            throw std::invalid_argument("operator entry coordinates out of range");
        }
        entries.emplace_back(row, col, Complex(e[2].get<double>(), e[3].get<double>()));
    }
    return SparseOperator::from_triplets(dim, entries, tag);
}

ordered_json model_to_json(const SusyModel& model) {
    ordered_json labels = ordered_json::object();
    for (const auto& [k, v] : model.labels) labels[k] = v;
    return ordered_json{{"version", 1},
                        {"N", model.n_modes},
                        {"Q", operator_to_json(model.supercharge)},
                        {"P", operator_to_json(model.projector)},
                        {"labels", labels}};
}

SusyModel model_from_json(const ordered_json& j) {
    const int version = j.at("version").get<int>();
    if (version != 1) throw std::invalid_argument("unsupported model version " + std::to_string(version));
    SusyModel model;
    model.n_modes = j.at("N").get<int>();
    if (model.n_modes < 1 || model.n_modes > 24) throw std::invalid_argument("model N out of range");
    model.supercharge = operator_from_json(j.at("Q"));
    model.projector = operator_from_json(j.at("P"));
    if (model.supercharge.dim() != model.dim() || model.projector.dim() != model.dim()) {
        throw std::invalid_argument("model operator dimensions do not match 2^N");
    }
    if (j.contains("labels")) {
        for (const auto& [k, v] : j.at("labels").items()) model.labels[k] = v.get<std::string>();
    }
    return model;
}

SusyModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model file: " + path);
    ordered_json j;
    in >> j;
    return model_from_json(j);
}

void save_model_file(const SusyModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write model file: " + path);
    out << model_to_json(model).dump(2) << "\n";
}

ordered_json validation_to_json(const ValidationReport& r) {
    return ordered_json{{"nilpotency_residual", r.nilpotency_residual},
                        {"parity_residual", r.parity_residual},
                        {"projector_idempotency", r.projector_idempotency},
                        {"projector_hermiticity", r.projector_hermiticity},
                        {"projector_compatibility", r.projector_compatibility},
                        {"tolerance", r.tolerance},
                        {"passed", r.passed}};
}

ordered_json spectral_to_json(const SpectralReport& r) {
    return ordered_json{{"eigenvalues", r.eigenvalues},
                        {"parities", r.parities},
                        {"n_B", r.n_bosonic_ground},
                        {"n_F", r.n_fermionic_ground},
                        {"witten_index", r.witten_index},
                        {"tolerance", r.tolerance},
                        {"ground_annihilation_residual", r.ground_annihilation_residual}};
}

ordered_json sample_to_json(const SampleRecord& r) {
    return ordered_json{{"shots", r.shots},
                        {"zeros", r.zeros},
                        {"seed", r.seed},
                        {"p0_hat", r.p0_hat},
                        {"ci95_halfwidth", r.ci95_halfwidth},
                        {"mode", r.mode}};
}

}  // namespace susyq
