#include "polycomb/cli.hpp"

#include <array>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "polycomb/audit.hpp"
#include "polycomb/errors.hpp"
#include "polycomb/serialize.hpp"
#include "polycomb/service.hpp"

namespace polycomb::cli {

namespace {

std::vector<std::string> split_whitespace(const std::string& line,
                                          std::vector<std::size_t>* columns = nullptr) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i == line.size())
            break;
        const auto start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        tokens.push_back(line.substr(start, i - start));
        if (columns)
            columns->push_back(start + 1);
    }
    return tokens;
}

bool is_skippable(const std::string& line) {
    const auto first = line.find_first_not_of(" \t\r");
    return first == std::string::npos || line[first] == '#';
}

} // namespace

AccessRequest parse_request_line(const std::string& line, std::size_t line_number) {
    std::vector<std::size_t> columns;
    const auto tokens = split_whitespace(line, &columns);
    if (tokens.size() != 3)
        throw ParseError("expected 'subject object type[,type...]', got " +
                             std::to_string(tokens.size()) + " field(s)",
                         line_number, tokens.size() > 3 ? columns[3] : line.size() + 1);
    AccessRequest req{tokens[0], tokens[1], {}};
    std::size_t offset = 0;
    const auto& types = tokens[2];
    while (offset <= types.size()) {
        auto comma = types.find(',', offset);
        if (comma == std::string::npos)
            comma = types.size();
        if (comma == offset)
            throw ParseError("empty access type", line_number, columns[2] + offset);
        req.requested.insert(types.substr(offset, comma - offset));
        offset = comma + 1;
    }
    return req;
}

std::vector<AccessRequest> parse_request_file(std::istream& in) {
    std::vector<AccessRequest> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (is_skippable(line))
            continue;
        out.push_back(parse_request_line(line, number));
    }
    return out;
}

std::vector<double> parse_grid(const std::string& text) {
    std::array<double, 3> parts{};
    std::size_t begin = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        auto end = i < 2 ? text.find(':', begin) : text.size();
        if (end == std::string::npos)
            throw ParseError("grid must have the form lo:hi:step", 1, text.size() + 1);
        const std::string field = text.substr(begin, end - begin);
        char* stop = nullptr;
        errno = 0;
        parts[i] = std::strtod(field.c_str(), &stop);
        if (field.empty() || *stop != '\0' || errno == ERANGE || !std::isfinite(parts[i]))
            throw ParseError("invalid number '" + field + "' in grid", 1, begin + 1);
        begin = end + 1;
    }
    const auto [lo, hi, step] = parts;
    if (!(lo > 0.0))
        throw ParseError("grid lower bound must be positive", 1, 1);
    if (!(step > 0.0))
        throw ParseError("grid step must be positive", 1, 1);
    if (hi < lo)
        throw ParseError("grid upper bound is below the lower bound", 1, 1);
    const double span = (hi - lo) / step;
    if (span > 1e6)
        throw ParseError("grid has more than a million points", 1, 1);
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        grid.push_back(lo + static_cast<double>(i) * step);
    return grid;
}

namespace {

enum class Format { human, json, csv };

struct Options {
    std::string config;
    std::string format = "human";
    std::string audit;
    bool no_audit = false;

    std::vector<std::string> request;
    std::string batch;

    std::string parameter;
    std::string grid;

    std::string bind = "127.0.0.1";
    int port = 8181;
};

Format format_of(const std::string& s) {
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    return Format::human;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const IoError*>(&e)) return kExitIo;
    if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
    if (dynamic_cast<const UnknownParameterError*>(&e)) return kExitUnknownParameter;
    if (dynamic_cast<const UnknownAccessTypeError*>(&e)) return kExitParse;
    if (dynamic_cast<const DomainError*>(&e)) return kExitParse;
    return kExitValidation;
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::string join_types(const AccessSet& set) {
    std::string out;
    for (const auto& t : set) {
        if (!out.empty())
            out += ',';
        out += t;
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        widths.resize(std::max(widths.size(), row.size()), 0);
        for (std::size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());
    }
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line += row[i];
            if (i + 1 < row.size())
                line += std::string(widths[i] - row[i].size() + 2, ' ');
        }
        out << line << '\n';
    }
}

std::filesystem::path audit_path(const Options& o) {
    if (!o.audit.empty())
        return o.audit;
    return o.config + ".audit.log";
}

AccessRequest single_request(const std::vector<std::string>& tokens) {
    if (tokens.size() == 1)
        return parse_request_line(tokens.front());
    std::string line;
    for (const auto& t : tokens)
        line += (line.empty() ? "" : " ") + t;
    return parse_request_line(line);
}

int cmd_validate(const Options& o, std::ostream& out) {
    const auto loaded = load_config_file(o.config);
    const auto& cfg = loaded.config;

    auto block_json = [](const PolicyBlock& b) {
        return nlohmann::ordered_json{{"elements", b.lattice.level_count()},
                                      {"order_pairs", b.lattice.declared_pair_count()},
                                      {"matrix_cells", b.matrix.cell_count()}};
    };
    auto block_text = [](const PolicyBlock& b) {
        return std::to_string(b.lattice.level_count()) + " lattice elements, " +
               std::to_string(b.lattice.declared_pair_count()) + " order pairs, " +
               std::to_string(b.matrix.cell_count()) + " matrix cells";
    };

    switch (format_of(o.format)) {
    case Format::json: {
        nlohmann::ordered_json j{{"status", "ok"},
                                 {"mode", to_string(cfg.mode)},
                                 {"config_fingerprint", loaded.fingerprint},
                                 {"confidentiality", block_json(cfg.confidentiality)}};
        if (cfg.integrity)
            j["integrity"] = block_json(*cfg.integrity);
        out << j.dump() << '\n';
        break;
    }
    case Format::csv:
        out << "status,mode,block,elements,order_pairs,matrix_cells,config_fingerprint\n";
        out << "ok," << to_string(cfg.mode) << ",confidentiality,"
            << cfg.confidentiality.lattice.level_count() << ','
            << cfg.confidentiality.lattice.declared_pair_count() << ','
            << cfg.confidentiality.matrix.cell_count() << ',' << loaded.fingerprint << '\n';
        if (cfg.integrity)
            out << "ok," << to_string(cfg.mode) << ",integrity,"
                << cfg.integrity->lattice.level_count() << ','
                << cfg.integrity->lattice.declared_pair_count() << ','
                << cfg.integrity->matrix.cell_count() << ',' << loaded.fingerprint << '\n';
        break;
    case Format::human:
        out << "OK mode=" << to_string(cfg.mode) << " m=" << cfg.scale.m()
            << " access_types=" << cfg.universe.size() << '\n';
        out << "  confidentiality: " << block_text(cfg.confidentiality) << '\n';
        if (cfg.integrity)
            out << "  integrity: " << block_text(*cfg.integrity) << '\n';
        out << "  fingerprint: " << loaded.fingerprint << '\n';
        break;
    }
    return kExitOk;
}

int cmd_decide(const Options& o, std::ostream& out, std::ostream& err) {
    const auto loaded = load_config_file(o.config);

    std::vector<AccessRequest> requests;
    if (!o.batch.empty()) {
        if (!o.request.empty())
            throw ParseError("give either a request or --batch, not both", 1, 1);
        std::ifstream in(o.batch);
        if (!in)
            throw IoError("cannot open request file '" + o.batch + "'");
        requests = parse_request_file(in);
    } else if (!o.request.empty()) {
        requests.push_back(single_request(o.request));
    } else {
        throw ParseError("no request given (use 'subject object types' or --batch FILE)", 1, 1);
    }

    std::unique_ptr<FileAuditSink> sink;
    if (!o.no_audit)
        sink = std::make_unique<FileAuditSink>(audit_path(o));

    std::vector<Decision> decisions;
    decisions.reserve(requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) {
        try {
            validate_request(requests[i], loaded.config.universe);
        } catch (const Error& e) {
            throw ParseError(e.what(), o.batch.empty() ? 1 : i + 1, 1);
        }
        auto result = evaluate_audited(loaded, requests[i], sink.get());
        if (result.audit_error)
            err << "warning: " << *result.audit_error << '\n';
        decisions.push_back(std::move(result.decision));
    }

    switch (format_of(o.format)) {
    case Format::json:
        for (const auto& d : decisions)
            out << serialize(d) << '\n';
        break;
    case Format::csv:
        out << "subject,object,access,combined,leakage,verdict\n";
        for (std::size_t i = 0; i < decisions.size(); ++i)
            out << csv_field(requests[i].subject) << ',' << csv_field(requests[i].object) << ','
                << csv_field(join_types(requests[i].requested)) << ','
                << format_number(decisions[i].combined.value) << ','
                << format_number(decisions[i].leakage) << ','
                << to_string(decisions[i].verdict) << '\n';
        break;
    case Format::human: {
        std::vector<std::vector<std::string>> rows{
            {"SUBJECT", "OBJECT", "ACCESS", "CLEARANCE", "LEAKAGE", "VERDICT"}};
        for (std::size_t i = 0; i < decisions.size(); ++i)
            rows.push_back({requests[i].subject, requests[i].object,
                            join_types(requests[i].requested),
                            format_number(decisions[i].combined.value),
                            format_number(decisions[i].leakage),
                            upper(to_string(decisions[i].verdict))});
        print_table(out, rows);
        for (std::size_t i = 0; i < decisions.size(); ++i) {
            const auto& d = decisions[i];
            out << "\n[" << i + 1 << "] " << format_request(requests[i]) << '\n';
            for (const auto& c : d.components)
                out << "  " << c.name << " = " << format_number(c.value) << '\n';
            for (const auto& w : d.weights_used)
                out << "  weight " << w.name << " = " << format_number(w.value) << '\n';
            out << "  p = " << format_number(d.combined.value) << ", "
                << upper(to_string(d.verdict)) << '\n';
            out << "  trace:\n";
            for (const auto& t : d.trace)
                out << "    " << t << '\n';
        }
        break;
    }
    }

    for (const auto& d : decisions)
        if (d.verdict == Verdict::deny)
            return kExitDenied;
    return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    const auto loaded = load_config_file(o.config);
    const auto grid = parse_grid(o.grid);
    if (o.request.empty())
        throw ParseError("no request given (use 'subject object types')", 1, 1);
    const auto req = single_request(o.request);
    const auto result = sweep(loaded.config, req, o.parameter, grid);

    switch (format_of(o.format)) {
    case Format::csv:
        out << "param,combined,verdict\n";
        for (const auto& row : result.rows)
            out << format_number(row.parameter) << ',' << format_number(row.combined.value) << ','
                << to_string(row.verdict) << '\n';
        break;
    case Format::json: {
        auto rows = nlohmann::ordered_json::array();
        for (const auto& row : result.rows)
            rows.push_back({{"param", round_for_output(row.parameter)},
                            {"combined", round_for_output(row.combined.value)},
                            {"verdict", to_string(row.verdict)}});
        nlohmann::ordered_json j{{"parameter", result.parameter}, {"rows", rows}};
        j["flip_at"] = result.flip_index
                           ? nlohmann::ordered_json(
                                 round_for_output(result.rows[*result.flip_index].parameter))
                           : nlohmann::ordered_json(nullptr);
        out << j.dump() << '\n';
        break;
    }
    case Format::human: {
        std::vector<std::vector<std::string>> rows{{result.parameter, "CLEARANCE", "VERDICT"}};
        for (const auto& row : result.rows)
            rows.push_back({format_number(row.parameter), format_number(row.combined.value),
                            upper(to_string(row.verdict))});
        print_table(out, rows);
        if (result.flip_index) {
            const auto& before = result.rows[*result.flip_index - 1];
            const auto& after = result.rows[*result.flip_index];
            out << "flip: " << to_string(before.verdict) << " -> " << to_string(after.verdict)
                << " between " << result.parameter << "=" << format_number(before.parameter)
                << " and " << result.parameter << "=" << format_number(after.parameter) << '\n';
        } else {
            out << "no flip over the grid\n";
        }
        break;
    }
    }
    return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& out) {
    std::shared_ptr<AuditSink> sink;
    if (!o.no_audit)
        sink = std::make_shared<FileAuditSink>(audit_path(o));
    PdpService service(o.config, sink);
    const int port = service.bind(o.bind, o.port);

    // SIGINT/SIGTERM stop the server from a dedicated thread.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    std::thread([&service, signals] {
        int sig = 0;
        sigwait(&signals, &sig);
        service.stop();
    }).detach();

    out << "serving on " << o.bind << ':' << port << " (fingerprint "
        << service.current()->fingerprint << ")" << std::endl;
    service.listen();
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Combine discretionary and mandatory access-control verdicts", "polycomb"};
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--config", o.config, "Policy configuration file (JSON)");
    app.add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"human", "json", "csv"}));
    app.add_option("--audit", o.audit, "Audit log path (default: <config>.audit.log)");
    app.add_flag("--no-audit", o.no_audit, "Do not write an audit trail");

    auto* validate = app.add_subcommand("validate", "Load and validate a configuration");
    auto* decide = app.add_subcommand("decide", "Evaluate one request or a request file");
    decide->add_option("request", o.request, "subject object type[,type...]");
    decide->add_option("--batch", o.batch, "Request file, one request per line");
    auto* sweep_cmd = app.add_subcommand("sweep", "Re-evaluate a request over a parameter grid");
    sweep_cmd->add_option("--param", o.parameter, "Combiner parameter to vary")->required();
    sweep_cmd->add_option("--grid", o.grid, "lo:hi:step")->required();
    sweep_cmd->add_option("request", o.request, "subject object type[,type...]");
    auto* serve = app.add_subcommand("serve", "Run the HTTP decision point");
    serve->add_option("--bind", o.bind, "Bind address");
    serve->add_option("--port", o.port, "Port");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParse;
    }
    if (o.config.empty()) {
        err << "error: --config is required\n";
        return kExitParse;
    }

    try {
        if (validate->parsed())
            return cmd_validate(o, out);
        if (decide->parsed())
            return cmd_decide(o, out, err);
        if (sweep_cmd->parsed())
            return cmd_sweep(o, out);
        if (serve->parsed())
            return cmd_serve(o, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return kExitParse;
}

} // namespace polycomb::cli
