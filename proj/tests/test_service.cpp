#include <doctest.h>

#include <atomic>
#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>

#include "polycomb/errors.hpp"
#include "polycomb/serialize.hpp"
#include "polycomb/service.hpp"
#include "test_util.hpp"

using namespace polycomb;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("polycomb-svc-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream(p, std::ios::binary | std::ios::trunc) << content;
}

std::string example1_with_r(double r) {
    auto j = fixture_json("example1.json");
    j["combiner"]["weighted"]["r"] = r;
    return j.dump(2);
}

const std::string kDecideBody = R"({"subject":"s","object":"o","access":["r"]})";

} // namespace

TEST_CASE("decide endpoint") {
    PdpService svc(fixture_path("example1.json"), nullptr);
    auto res = svc.handle_decide(kDecideBody);
    CHECK(res.status == 200);
    const auto j = json::parse(res.body);
    CHECK(j["verdict"] == "deny");
    CHECK(j["combined"] == -0.25);
    const auto cfg = load_config_file(fixture_path("example1.json")).config;
    CHECK(res.body == serialize(evaluate(cfg, {"s", "o", {"r"}})));
}

TEST_CASE("decide endpoint errors") {
    PdpService svc(fixture_path("example1.json"), nullptr);
    auto status = [&](const std::string& body) { return svc.handle_decide(body).status; };
    CHECK(status(R"({"subject":"s","object":"o","access":[]})") == 400);
    CHECK(status(R"({"subject":"s","object":"o"})") == 400);
    CHECK(status(R"({"subject":"s","object":"o","access":["zz"]})") == 400);
    CHECK(status(R"({"subject":"s","object":"o","access":[1]})") == 400);
    CHECK(status(R"({"subject":1,"object":"o","access":["r"]})") == 400);
    CHECK(status(R"({"subject":"s","object":"o","access":["r"],"extra":1})") == 400);
    CHECK(status("not json") == 400);
    CHECK(status("[]") == 400);
    CHECK(status(R"({"subject":"ghost","object":"o","access":["r"]})") == 422);
    CHECK(status(R"({"subject":"s","object":"ghost","access":["r"]})") == 422);

    const auto body = json::parse(svc.handle_decide(R"({"subject":"ghost","object":"o","access":["r"]})").body);
    CHECK(body["error"].is_string());
    CHECK(body["detail"].get<std::string>().find("ghost") != std::string::npos);
}

TEST_CASE("health endpoint") {
    PdpService svc(fixture_path("example1.json"), nullptr);
    const auto a = svc.handle_health();
    const auto b = svc.handle_health();
    CHECK(a.status == 200);
    CHECK(a.body == b.body);
    const auto j = json::parse(a.body);
    CHECK(j["status"] == "ok");
    CHECK(j["mode"] == "weighted");
    CHECK(j["config_fingerprint"] == fingerprint(read_fixture("example1.json")));
}

TEST_CASE("constructor propagates load errors") {
    CHECK_THROWS_AS(PdpService("/nonexistent/policy.json", nullptr), IoError);
    CHECK_THROWS_AS(PdpService(fixture_path("antichain.json"), nullptr), ValidationError);
}

TEST_CASE("reload") {
    TempDir dir;
    const auto path = dir.path / "policy.json";
    write_file(path, example1_with_r(1.0));
    PdpService svc(path, nullptr);
    CHECK(json::parse(svc.handle_decide(kDecideBody).body)["verdict"] == "grant");
    const auto before = json::parse(svc.handle_health().body)["config_fingerprint"];

    SUBCASE("unchanged file keeps the fingerprint") {
        const auto res = svc.handle_reload();
        CHECK(res.status == 200);
        CHECK(json::parse(res.body)["config_fingerprint"] == before);
    }
    SUBCASE("broken file is rejected and the old config stays live") {
        write_file(path, "{ broken");
        const auto res = svc.handle_reload();
        CHECK(res.status == 409);
        CHECK(json::parse(res.body).contains("detail"));
        CHECK(json::parse(svc.handle_decide(kDecideBody).body)["verdict"] == "grant");
        CHECK(json::parse(svc.handle_health().body)["config_fingerprint"] == before);
    }
    SUBCASE("raising r flips the decision") {
        write_file(path, example1_with_r(3.0));
        const auto res = svc.handle_reload();
        CHECK(res.status == 200);
        CHECK(json::parse(res.body)["config_fingerprint"] != before);
        const auto j = json::parse(svc.handle_decide(kDecideBody).body);
        CHECK(j["verdict"] == "deny");
        CHECK(j["combined"] == -0.25);
    }
}

TEST_CASE("each decide appends one audit record") {
    TempDir dir;
    auto sink = std::make_shared<FileAuditSink>(dir.path / "audit.log");
    PdpService svc(fixture_path("example1.json"), sink);
    svc.handle_decide(kDecideBody);
    svc.handle_decide(kDecideBody);
    svc.handle_decide(R"({"subject":"s","object":"o","access":[]})"); // rejected, not audited
    svc.handle_health();
    std::ifstream in(dir.path / "audit.log");
    int lines = 0;
    for (std::string l; std::getline(in, l);)
        ++lines;
    CHECK(lines == 2);
}

TEST_CASE("decisions during reloads come from exactly one config") {
    TempDir dir;
    const auto path = dir.path / "policy.json";
    write_file(path, example1_with_r(1.0));
    PdpService svc(path, nullptr);

    const auto cfg1 = load_config(example1_with_r(1.0)).config;
    const auto cfg3 = load_config(example1_with_r(3.0)).config;
    const auto body1 = serialize(evaluate(cfg1, {"s", "o", {"r"}}));
    const auto body3 = serialize(evaluate(cfg3, {"s", "o", {"r"}}));

    std::atomic<bool> done{false};
    std::atomic<int> mixed{0};
    std::vector<std::thread> readers;
    for (int t = 0; t < 4; ++t)
        readers.emplace_back([&] {
            while (!done) {
                const auto res = svc.handle_decide(kDecideBody);
                if (res.status != 200 || (res.body != body1 && res.body != body3))
                    ++mixed;
            }
        });
    for (int i = 0; i < 40; ++i) {
        write_file(path, example1_with_r(i % 2 ? 1.0 : 3.0));
        svc.handle_reload();
    }
    done = true;
    for (auto& t : readers)
        t.join();
    CHECK(mixed == 0);
}

TEST_CASE("served over HTTP") {
    PdpService svc(fixture_path("example1.json"), nullptr);
    const int port = svc.bind("127.0.0.1", 0);
    std::thread server([&] { svc.listen(); });
    svc.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto res = client.Post("/v1/decide", kDecideBody, "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Type") == "application/json");
    CHECK(json::parse(res->body)["verdict"] == "deny");

    res = client.Post("/v1/decide", R"({"subject":"s","object":"o","access":[]})",
                      "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);

    res = client.Get("/v1/health");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(json::parse(res->body)["mode"] == "weighted");

    res = client.Post("/v1/reload", "", "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);

    res = client.Get("/v1/nothing");
    REQUIRE(res);
    CHECK(res->status == 404);

    svc.stop();
    server.join();
}
