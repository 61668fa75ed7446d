#include <doctest.h>

#include <fstream>
#include <random>
#include <regex>
#include <thread>

#include "polycomb/audit.hpp"
#include "polycomb/errors.hpp"
#include "polycomb/serialize.hpp"
#include "test_util.hpp"

using namespace polycomb;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("polycomb-audit-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::vector<std::string> lines_of(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line))
        out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("timestamp format") {
    using namespace std::chrono;
    const sys_time<milliseconds> t{milliseconds{1'700'000'000'123}};
    CHECK(format_timestamp(t) == "2023-11-14T22:13:20.123Z");
    CHECK(format_timestamp(sys_time<milliseconds>{milliseconds{0}}) == "1970-01-01T00:00:00.000Z");
}

TEST_CASE("audit line carries timestamp, fingerprint and decision") {
    const auto loaded = load_config_file(fixture_path("example1.json"));
    const AccessRequest req{"s", "o", {"r"}};
    const auto d = evaluate(loaded.config, req);
    const AuditRecord rec{std::chrono::system_clock::now(), req, d, loaded.fingerprint};
    const auto line = format_audit_line(rec);
    CHECK(line.find('\n') == std::string::npos);
    const std::regex shape(R"(^\d{4}-\d\d-\d\dT\d\d:\d\d:\d\d\.\d{3}Z\t[0-9a-f]{64}\t\{.*\}$)");
    CHECK(std::regex_match(line, shape));
    CHECK(line.find(loaded.fingerprint) != std::string::npos);
    CHECK(line.find("\"verdict\":\"deny\"") != std::string::npos);
    CHECK(line.find("\"combined\":-0.25") != std::string::npos);
    CHECK(line.substr(line.rfind('\t') + 1) == serialize(d));
}

TEST_CASE("file sink appends in order") {
    TempDir dir;
    const auto loaded = load_config_file(fixture_path("example1.json"));
    FileAuditSink sink(dir.path / "audit.log");
    auto first = evaluate_audited(loaded, {"s", "o", {"r"}}, &sink);
    auto second = evaluate_audited(loaded, {"s", "o", {"r", "f"}}, &sink);
    CHECK_FALSE(first.audit_error);
    CHECK_FALSE(second.audit_error);
    const auto lines = lines_of(dir.path / "audit.log");
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].find("access={r}") != std::string::npos);
    CHECK(lines[1].find("access={f,r}") != std::string::npos);
}

TEST_CASE("unwritable sink still yields the decision") {
    const auto loaded = load_config_file(fixture_path("example1.json"));
    FileAuditSink sink("/nonexistent-dir/polycomb/audit.log");
    const AccessRequest req{"s", "o", {"r"}};
    CHECK_THROWS_AS(append_audit(sink, {std::chrono::system_clock::now(), req,
                                        evaluate(loaded.config, req), loaded.fingerprint}),
                    SinkError);
    const auto result = evaluate_audited(loaded, req, &sink);
    CHECK(result.audit_error.has_value());
    CHECK(result.decision.verdict == Verdict::deny);
    CHECK(result.decision.combined.value == -0.25);
}

TEST_CASE("concurrent appends produce whole lines") {
    TempDir dir;
    const auto loaded = load_config_file(fixture_path("example1.json"));
    FileAuditSink sink(dir.path / "audit.log");
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&] {
            for (int i = 0; i < 25; ++i)
                evaluate_audited(loaded, {"s", "o", {"r"}}, &sink);
        });
    for (auto& t : threads)
        t.join();
    const auto lines = lines_of(dir.path / "audit.log");
    CHECK(lines.size() == 100);
    for (const auto& l : lines)
        CHECK(l.back() == '}');
}
