#include <doctest.h>

#include <filesystem>

#include "susyq/serialize.hpp"
#include "test_util.hpp"

using namespace susyq;
namespace tu = susyq::testutil;

TEST_SUITE_BEGIN("serialize");

TEST_CASE("operator JSON round trip is entrywise exact") {
    const SparseOperator a = tu::random_operator(8, 123);
    const SparseOperator back = operator_from_json(operator_to_json(a));
    CHECK(back.dim() == a.dim());
    CHECK(back.nonzeros() == a.nonzeros());
    CHECK(sub(back, a).max_abs() == 0.0);

    // decimal round trip through text as well
    const auto text = operator_to_json(a).dump();
    const SparseOperator reparsed = operator_from_json(nlohmann::ordered_json::parse(text));
    CHECK(sub(reparsed, a).max_abs() == 0.0);
    CHECK(reparsed.parity_tag() == a.parity_tag());
}

TEST_CASE("model JSON round trip preserves validation") {
    const SusyModel m = hardcore_model(tu::path3());
    const SusyModel back = model_from_json(model_to_json(m));
    CHECK(back.n_modes == m.n_modes);
    CHECK(sub(back.supercharge, m.supercharge).max_abs() == 0.0);
    CHECK(sub(back.projector, m.projector).max_abs() == 0.0);
    CHECK(back.labels.at("family") == "hardcore");
    CHECK(validate(back).passed);
}

TEST_CASE("model file save/load") {
    const auto path = std::filesystem::temp_directory_path() / "susyq_test_model.json";
    const SusyModel m = syk_model(random_syk_coupling(4, 3, 5));
    save_model_file(m, path.string());
    const SusyModel back = load_model_file(path.string());
    CHECK(sub(back.supercharge, m.supercharge).max_abs() == 0.0);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load_model_file("/nonexistent/model.json"), std::invalid_argument);
}

TEST_CASE("malformed documents are rejected") {
    CHECK_THROWS(model_from_json(nlohmann::ordered_json::parse(R"({"version": 2})")));
    CHECK_THROWS(operator_from_json(nlohmann::ordered_json::parse(R"({"dim": 2, "entries": [[0, 5, 1.0, 0.0]]})")));
    CHECK_THROWS(operator_from_json(nlohmann::ordered_json::parse(R"({"dim": 2, "entries": [[0, 1, 1.0]]})")));
}

TEST_SUITE_END();
