#include "polycomb/audit.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <ctime>

#include <fcntl.h>
#include <unistd.h>

#include "polycomb/errors.hpp"
#include "polycomb/serialize.hpp"

namespace polycomb {

std::string format_timestamp(std::chrono::system_clock::time_point t) {
    using namespace std::chrono;
    const auto ms = duration_cast<milliseconds>(t.time_since_epoch());
    auto secs = duration_cast<seconds>(ms);
    auto millis = (ms - secs).count();
    if (millis < 0) {
        millis += 1000;
        secs -= seconds(1);
    }
    const std::time_t tt = secs.count();
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[40];
    const auto n = std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    std::snprintf(buf + n, sizeof buf - n, ".%03dZ", static_cast<int>(millis));
    return buf;
}

std::string format_audit_line(const AuditRecord& rec) {
    return format_timestamp(rec.timestamp) + '\t' + rec.fingerprint + '\t' + serialize(rec.decision);
}

FileAuditSink::FileAuditSink(std::filesystem::path path) : path_(std::move(path)) {}

FileAuditSink::~FileAuditSink() {
    if (fd_ >= 0)
        ::close(fd_);
}

void FileAuditSink::append(const AuditRecord& rec) {
    const std::string line = format_audit_line(rec) + '\n';
    std::lock_guard lock(mutex_);
    if (fd_ < 0) {
        fd_ = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
        if (fd_ < 0)
            throw SinkError("cannot open audit file '" + path_.string() +
                            "': " + std::strerror(errno));
    }
    std::size_t written = 0;
    while (written < line.size()) {
        const auto n = ::write(fd_, line.data() + written, line.size() - written);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            throw SinkError("cannot write audit file '" + path_.string() +
                            "': " + std::strerror(errno));
        }
        written += static_cast<std::size_t>(n);
    }
    if (::fsync(fd_) != 0)
        throw SinkError("cannot sync audit file '" + path_.string() + "': " + std::strerror(errno));
}

void append_audit(AuditSink& sink, const AuditRecord& rec) {
    sink.append(rec);
}

AuditedDecision evaluate_audited(const LoadedConfig& loaded, const AccessRequest& req,
                                 AuditSink* sink) {
    AuditedDecision out{evaluate(loaded.config, req), std::nullopt};
    if (sink) {
        try {
            append_audit(*sink, {std::chrono::system_clock::now(), req, out.decision,
                                 loaded.fingerprint});
        } catch (const SinkError& e) {
            out.audit_error = e.what();
        }
    }
    return out;
}

} // namespace polycomb
