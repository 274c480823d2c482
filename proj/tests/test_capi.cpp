#include "fgeom/fgeom.h"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Ctx {
    fgeom_context* p = nullptr;
    Ctx() { REQUIRE(fgeom_context_new(&p) == FGEOM_OK); }
    ~Ctx() { fgeom_context_free(p); }
};

struct Result {
    fgeom_status status;
    int passed = -1;
    json report;
};

Result run(fgeom_context* ctx, const char* pipeline, const std::string& options)
{
    Result r{};
    char* text = nullptr;
    r.status = fgeom_run(ctx, pipeline, options.c_str(), &text, &r.passed);
    if (text) {
        r.report = json::parse(text);
        fgeom_string_free(text);
    }
    return r;
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "fgeom_capi_test";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("version, statuses and pipeline names")
{
    CHECK(std::string(fgeom_version()) == "1.0.0");
    CHECK(std::string(fgeom_status_string(FGEOM_OK)) != "");
    CHECK(std::string(fgeom_status_string(FGEOM_TIMEOUT)) != std::string(fgeom_status_string(FGEOM_OK)));
    const size_t n = fgeom_pipeline_count();
    CHECK(n == 12);
    bool has_verify = false;
    for (size_t i = 0; i < n; ++i)
        has_verify = has_verify || std::string(fgeom_pipeline_name(i)) == "scheme.verify";
    CHECK(has_verify);
    CHECK(fgeom_pipeline_name(n) == nullptr);
    CHECK(fgeom_default_threads() >= 1);
}

TEST_CASE("NULL arguments")
{
    CHECK(fgeom_context_new(nullptr) == FGEOM_INVALID_ARGUMENT);
    CHECK(std::string(fgeom_last_error()) != "");
    Ctx c;
    char* text = reinterpret_cast<char*>(0x1);
    CHECK(fgeom_run(nullptr, "scheme.eigen", nullptr, &text, nullptr) == FGEOM_INVALID_ARGUMENT);
    CHECK(text == nullptr);
    CHECK(fgeom_run(c.p, nullptr, nullptr, &text, nullptr) == FGEOM_INVALID_ARGUMENT);
    CHECK(fgeom_run(c.p, "scheme.eigen", nullptr, nullptr, nullptr) == FGEOM_INVALID_ARGUMENT);
    fgeom_context_free(nullptr);
    fgeom_string_free(nullptr);
}

TEST_CASE("a passing run returns the report")
{
    Ctx c;
    const auto r = run(c.p, "scheme.eigen", R"({"q": 3})");
    CHECK(r.status == FGEOM_OK);
    CHECK(r.passed == 1);
    CHECK(r.report["q"] == 3);
    CHECK(r.report["pipeline"] == "scheme.eigen");
    CHECK(r.report["passed"] == true);
    CHECK(r.report["results"]["multiplicities"] == json::array({1, 32, 54, 48, 36, 72}));
    for (const auto& chk : r.report["checks"]) {
        CHECK(chk.contains("id"));
        CHECK(chk.contains("claim"));
        CHECK(chk["passed"] == true);
    }
    char* text = nullptr;
    CHECK(fgeom_run(c.p, "scheme.eigen", nullptr, &text, nullptr) == FGEOM_OK);
    fgeom_string_free(text);
}

TEST_CASE("reports are identical apart from timing")
{
    Ctx c;
    auto a = run(c.p, "klein.perspective", R"({"q": 3, "samples": 100, "seed": 5})").report;
    auto b = run(c.p, "klein.perspective", R"({"q": 3, "samples": 100, "seed": 5})").report;
    a.erase("timing");
    b.erase("timing");
    CHECK(a.dump() == b.dump());
}

TEST_CASE("argument errors")
{
    Ctx c;
    char* text = nullptr;
    CHECK(fgeom_run(c.p, "no.such.pipeline", nullptr, &text, nullptr) == FGEOM_INVALID_ARGUMENT);
    CHECK(text == nullptr);
    CHECK(std::string(fgeom_last_error()).find("no.such.pipeline") != std::string::npos);
    CHECK(run(c.p, "scheme.eigen", R"({"q": 4})").status == FGEOM_UNSUPPORTED_Q);
    CHECK(run(c.p, "scheme.verify", R"({"q": 7})").status == FGEOM_UNSUPPORTED_Q);
    CHECK(run(c.p, "scheme.eigen", R"({"q": 3, "bogus": 1})").status == FGEOM_INVALID_ARGUMENT);
    CHECK(run(c.p, "scheme.eigen", "{not json").status == FGEOM_INVALID_ARGUMENT);
    CHECK(run(c.p, "scheme.eigen", R"({"q": "three"})").status == FGEOM_INVALID_ARGUMENT);
}

TEST_CASE("file errors and tampered input")
{
    Ctx c;
    CHECK(run(c.p, "pseudoconic.verify", json{{"q", 3}, {"in", scratch("missing.json").string()}}.dump()).status
          == FGEOM_IO);

    const auto bad = scratch("garbage.json");
    std::ofstream(bad) << "not json at all";
    CHECK(run(c.p, "pseudoconic.verify", json{{"q", 3}, {"in", bad.string()}}.dump()).status == FGEOM_PARSE);

    const auto file = scratch("conic.json");
    const auto built = run(c.p, "pseudoconic.build", json{{"q", 3}, {"out", file.string()}}.dump());
    REQUIRE(built.status == FGEOM_OK);
    const auto ok = run(c.p, "pseudoconic.verify", json{{"q", 3}, {"in", file.string()}}.dump());
    CHECK(ok.status == FGEOM_OK);
    CHECK(ok.passed == 1);

    json j;
    std::ifstream(file) >> j;
    auto& gens = j["generators"];
    REQUIRE(gens.size() == 10);
    gens[3] = gens[3].get<int>() == 0 ? 1 : 0;
    const auto tampered = scratch("tampered.json");
    std::ofstream(tampered) << j.dump();
    const auto r = run(c.p, "pseudoconic.verify", json{{"q", 3}, {"in", tampered.string()}}.dump());
    CHECK(r.status == FGEOM_VERIFICATION);
    CHECK(r.passed == 0);
    CHECK(r.report["passed"] == false);
}

TEST_CASE("timeouts are reported")
{
    Ctx c;
    const auto r = run(c.p, "search.uset-feasibility", R"({"q": 5, "uset": 3, "timeout": 0.2})");
    CHECK(r.status == FGEOM_TIMEOUT);
    CHECK(r.passed == 0);
    REQUIRE(r.report.is_object());
    CHECK(r.report["results"]["timeouts"] == 1);
}

TEST_CASE("a context can be shared between threads")
{
    Ctx c;
    Result a, b;
    std::thread t1([&] { a = run(c.p, "scheme.quotient", R"({"q": 3})"); });
    std::thread t2([&] { b = run(c.p, "klein.intertwine", R"({"q": 3})"); });
    t1.join();
    t2.join();
    CHECK(a.status == FGEOM_OK);
    CHECK(b.status == FGEOM_OK);
}

TEST_CASE("cached tables are reused and checked")
{
    Ctx c;
    const auto dir = scratch("cache");
    fs::remove_all(dir);
    const std::string opts = json{{"q", 3}, {"cache_dir", dir.string()}}.dump();
    CHECK(run(c.p, "scheme.eigen", opts).status == FGEOM_OK);
    int files = 0;
    for (const auto& e : fs::directory_iterator(dir))
        files += e.path().extension() == ".json";
    CHECK(files == 1);
    Ctx fresh;
    CHECK(run(fresh.p, "scheme.eigen", opts).status == FGEOM_OK);
}
