#pragma once

/// \file
/// HTTP policy decision point. Endpoints:
///   POST /v1/decide  {"subject","object","access":[...]} -> Decision
///   GET  /v1/health  -> {"status","config_fingerprint","mode"}
///   POST /v1/reload  -> re-reads the config file; 409 keeps the old one
/// Errors carry {"error": string, "detail": string}.

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "polycomb/audit.hpp"
#include "polycomb/config.hpp"

namespace polycomb {

struct HttpResponse {
    int status = 200;
    std::string body;
};

class PdpService {
public:
    /// Loads the config immediately; load errors propagate. `sink` may be null.
    PdpService(std::filesystem::path config_path, std::shared_ptr<AuditSink> sink);
    ~PdpService();

    PdpService(const PdpService&) = delete;
    PdpService& operator=(const PdpService&) = delete;

    /// Snapshot of the live config. Holders keep it alive across reloads.
    std::shared_ptr<const LoadedConfig> current() const;

    HttpResponse handle_decide(std::string_view body) const;
    HttpResponse handle_health() const;
    HttpResponse handle_reload();

    /// Binds the listening socket; port 0 picks a free port. Returns the
    /// bound port. Throws IoError on failure.
    int bind(const std::string& host, int port);
    /// Serves until stop(). Requires a prior bind().
    void listen();
    /// Blocks until a concurrent listen() accepts connections.
    void wait_until_ready() const;
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace polycomb
