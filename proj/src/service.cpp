#include "polycomb/service.hpp"

#include <iostream>
#include <mutex>

#include <httplib.h>
#include <json.hpp>

#include "polycomb/errors.hpp"
#include "polycomb/serialize.hpp"

namespace polycomb {

using nlohmann::json;

struct PdpService::Impl {
    std::filesystem::path config_path;
    std::shared_ptr<AuditSink> sink;
    mutable std::mutex config_mutex;
    std::shared_ptr<const LoadedConfig> config;
    std::mutex reload_mutex;
    httplib::Server server;
};

namespace {

HttpResponse error_response(int status, std::string_view error, std::string_view detail) {
    json body{{"error", error}, {"detail", detail}};
    return {status, body.dump()};
}

} // namespace

PdpService::PdpService(std::filesystem::path config_path, std::shared_ptr<AuditSink> sink)
    : impl_(std::make_unique<Impl>()) {
    impl_->config_path = std::move(config_path);
    impl_->sink = std::move(sink);
    impl_->config = std::make_shared<const LoadedConfig>(load_config_file(impl_->config_path));

    auto reply = [](httplib::Response& res, const HttpResponse& r) {
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    impl_->server.Post("/v1/decide", [this, reply](const httplib::Request& req,
                                                   httplib::Response& res) {
        reply(res, handle_decide(req.body));
    });
    impl_->server.Get("/v1/health", [this, reply](const httplib::Request&, httplib::Response& res) {
        reply(res, handle_health());
    });
    impl_->server.Post("/v1/reload", [this, reply](const httplib::Request&, httplib::Response& res) {
        reply(res, handle_reload());
    });
    impl_->server.set_exception_handler(
        [reply](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            std::string detail = "unknown exception";
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& e) {
                detail = e.what();
            } catch (...) {
            }
            reply(res, error_response(500, "internal", detail));
        });
}

PdpService::~PdpService() {
    stop();
}

std::shared_ptr<const LoadedConfig> PdpService::current() const {
    std::lock_guard lock(impl_->config_mutex);
    return impl_->config;
}

HttpResponse PdpService::handle_decide(std::string_view body) const {
    const auto loaded = current();

    AccessRequest req;
    try {
        const json j = json::parse(body);
        if (!j.is_object())
            return error_response(400, "bad_request", "body must be a JSON object");
        for (const auto& item : j.items())
            if (item.key() != "subject" && item.key() != "object" && item.key() != "access")
                return error_response(400, "bad_request", "unknown field '" + item.key() + "'");
        const auto subject = j.find("subject");
        const auto object = j.find("object");
        const auto access = j.find("access");
        if (subject == j.end() || !subject->is_string())
            return error_response(400, "bad_request", "field 'subject' must be a string");
        if (object == j.end() || !object->is_string())
            return error_response(400, "bad_request", "field 'object' must be a string");
        if (access == j.end() || !access->is_array())
            return error_response(400, "bad_request", "field 'access' must be an array of strings");
        if (access->empty())
            return error_response(400, "bad_request", "field 'access' must not be empty");
        req.subject = subject->get<std::string>();
        req.object = object->get<std::string>();
        for (const auto& t : *access) {
            if (!t.is_string())
                return error_response(400, "bad_request", "access types must be strings");
            req.requested.insert(t.get<std::string>());
        }
        validate_request(req, loaded->config.universe);
    } catch (const json::exception& e) {
        return error_response(400, "bad_request", e.what());
    } catch (const UnknownAccessTypeError& e) {
        return error_response(400, "bad_request", e.what());
    } catch (const DomainError& e) {
        return error_response(400, "bad_request", e.what());
    }

    try {
        auto result = evaluate_audited(*loaded, req, impl_->sink.get());
        if (result.audit_error)
            std::cerr << "polycomb: audit failure: " << *result.audit_error << '\n';
        return {200, serialize(result.decision)};
    } catch (const UnknownSubjectError& e) {
        return error_response(422, "unknown_subject", e.what());
    } catch (const UnknownObjectError& e) {
        return error_response(422, "unknown_object", e.what());
    } catch (const std::exception& e) {
        return error_response(500, "internal", e.what());
    }
}

HttpResponse PdpService::handle_health() const {
    const auto loaded = current();
    json body{{"status", "ok"},
              {"config_fingerprint", loaded->fingerprint},
              {"mode", to_string(loaded->config.mode)}};
    return {200, body.dump()};
}

HttpResponse PdpService::handle_reload() {
    std::lock_guard serial(impl_->reload_mutex);
    std::shared_ptr<const LoadedConfig> fresh;
    try {
        fresh = std::make_shared<const LoadedConfig>(load_config_file(impl_->config_path));
    } catch (const Error& e) {
        return error_response(409, "validation_failed", e.what());
    }
    {
        std::lock_guard lock(impl_->config_mutex);
        impl_->config = fresh;
    }
    json body{{"status", "reloaded"},
              {"config_fingerprint", fresh->fingerprint},
              {"mode", to_string(fresh->config.mode)}};
    return {200, body.dump()};
}

int PdpService::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port(host);
        if (bound < 0)
            throw IoError("cannot bind " + host);
        return bound;
    }
    if (!impl_->server.bind_to_port(host, port))
        throw IoError("cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void PdpService::listen() {
    impl_->server.listen_after_bind();
}

void PdpService::wait_until_ready() const {
    impl_->server.wait_until_ready();
}

void PdpService::stop() {
    if (impl_ && impl_->server.is_running())
        impl_->server.stop();
}

} // namespace polycomb
