#pragma once

/// \file
/// Append-only audit trail. One line per decision:
///   <ISO-8601 UTC timestamp>\t<config fingerprint>\t<serialized decision>

#include <chrono>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

#include "polycomb/engine.hpp"

namespace polycomb {

struct AuditRecord {
    std::chrono::system_clock::time_point timestamp;
    AccessRequest request;
    Decision decision;
    std::string fingerprint;
};

/// e.g. 2026-10-15T22:28:00.123Z
std::string format_timestamp(std::chrono::system_clock::time_point t);

/// The audit line without its trailing newline.
std::string format_audit_line(const AuditRecord& rec);

class AuditSink {
public:
    virtual ~AuditSink() = default;
    /// Throws SinkError on I/O failure.
    virtual void append(const AuditRecord& rec) = 0;
};

/// Appends to a file with O_APPEND, one write(2) per line, fsync'd.
/// Appends from several threads are serialized.
class FileAuditSink final : public AuditSink {
public:
    explicit FileAuditSink(std::filesystem::path path);
    ~FileAuditSink() override;

    FileAuditSink(const FileAuditSink&) = delete;
    FileAuditSink& operator=(const FileAuditSink&) = delete;

    void append(const AuditRecord& rec) override;
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    std::mutex mutex_;
    int fd_ = -1;
};

void append_audit(AuditSink& sink, const AuditRecord& rec);

struct AuditedDecision {
    Decision decision;
    std::optional<std::string> audit_error; // set when the sink failed
};

/// Evaluates and records the decision. A sink failure never suppresses the
/// decision; it is reported in audit_error instead. A null sink skips audit.
AuditedDecision evaluate_audited(const LoadedConfig& loaded, const AccessRequest& req,
                                 AuditSink* sink);

} // namespace polycomb
