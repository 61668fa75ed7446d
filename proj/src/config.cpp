#include "polycomb/config.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "polycomb/errors.hpp"

namespace polycomb {

using nlohmann::json;

std::string_view to_string(Mode mode) noexcept {
    switch (mode) {
    case Mode::weighted: return "weighted";
    case Mode::ahp_fig1: return "ahp_fig1";
    case Mode::ahp_fig2: return "ahp_fig2";
    }
    return "?";
}

std::optional<Mode> parse_mode(std::string_view text) noexcept {
    if (text == "weighted") return Mode::weighted;
    if (text == "ahp_fig1") return Mode::ahp_fig1;
    if (text == "ahp_fig2") return Mode::ahp_fig2;
    return std::nullopt;
}

const std::vector<std::string>& parameter_names(Mode mode) {
    static const std::vector<std::string> weighted{"r"};
    static const std::vector<std::string> fig1{"r", "r1", "r2"};
    static const std::vector<std::string> fig2{"x", "x1", "x2"};
    switch (mode) {
    case Mode::weighted: return weighted;
    case Mode::ahp_fig1: return fig1;
    case Mode::ahp_fig2: return fig2;
    }
    return weighted;
}

namespace {

Mode mode_of(const CombinerParams& params) {
    return static_cast<Mode>(params.index());
}

double* parameter_slot(CombinerParams& params, std::string_view name) {
    if (auto* w = std::get_if<WeightedConfig>(&params)) {
        if (name == "r") return &w->r;
    } else if (auto* a = std::get_if<AhpConfigFig1>(&params)) {
        if (name == "r") return &a->r;
        if (name == "r1") return &a->r1;
        if (name == "r2") return &a->r2;
    } else if (auto* b = std::get_if<AhpConfigFig2>(&params)) {
        if (name == "x") return &b->x;
        if (name == "x1") return &b->x1;
        if (name == "x2") return &b->x2;
    }
    throw UnknownParameterError(std::string(name), std::string(to_string(mode_of(params))));
}

} // namespace

double get_parameter(const CombinerParams& params, std::string_view name) {
    auto copy = params;
    return *parameter_slot(copy, name);
}

CombinerParams with_parameter(CombinerParams params, std::string_view name, double value) {
    pairwise_weights(value); // rejects non-positive ratios
    *parameter_slot(params, name) = value;
    return params;
}

std::string fingerprint(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 digest failed");
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i)
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return hex.str();
}

namespace {

// Schema walking helpers. `path` is a dotted location used in messages.

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<std::string_view> allowed) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (auto a : allowed)
            ok = ok || item.key() == a;
        if (!ok)
            throw ValidationError("unknown key '" + item.key() + "' in " + path);
    }
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError("missing key '" + key + "' in " + path);
    return *it;
}

const json& require_object(const json& obj, const std::string& key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_object())
        throw ValidationError(path + "." + key + " must be an object");
    return v;
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string())
        throw ValidationError(where + " must be a string");
    return v.get<std::string>();
}

std::vector<std::string> as_string_list(const json& v, const std::string& where) {
    if (!v.is_array())
        throw ValidationError(where + " must be an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(as_string(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

double as_positive_ratio(const json& v, const std::string& where) {
    if (!v.is_number())
        throw ValidationError(where + " must be a number");
    const double d = v.get<double>();
    if (!(d > 0.0))
        throw ValidationError(where + " must be positive, got " + v.dump());
    return d;
}

ClearanceScale parse_scale(const json& v, const std::string& where) {
    if (!v.is_object())
        throw ValidationError(where + " must be an object");
    reject_unknown_keys(v, where, {"m"});
    const json& m = require(v, "m", where);
    if (!m.is_number_integer())
        throw ValidationError(where + ".m must be an integer");
    const auto value = m.get<long long>();
    if (value < 1)
        throw ValidationError(where + ".m must be >= 1, got " + std::to_string(value));
    return ClearanceScale(value);
}

CellKey parse_cell_key(const std::string& key, const std::string& where) {
    const auto colon = key.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == key.size() ||
        key.find(':', colon + 1) != std::string::npos)
        throw ValidationError(where + ": key '" + key + "' must have the form subject:object");
    return {key.substr(0, colon), key.substr(colon + 1)};
}

SecurityLattice parse_lattice(const json& v, const std::string& path) {
    reject_unknown_keys(v, path, {"elements", "order"});
    auto elements = as_string_list(require(v, "elements", path), path + ".elements");
    std::vector<OrderPair> order;
    if (auto it = v.find("order"); it != v.end()) {
        if (!it->is_array())
            throw ValidationError(path + ".order must be an array of [lower, upper] pairs");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto where = path + ".order[" + std::to_string(i) + "]";
            auto pair = as_string_list((*it)[i], where);
            if (pair.size() != 2)
                throw ValidationError(where + " must have exactly two labels");
            order.emplace_back(std::move(pair[0]), std::move(pair[1]));
        }
    }
    try {
        return SecurityLattice::build(elements, order);
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

std::map<std::string, std::string> parse_labels(const json& v, const std::string& where,
                                                const SecurityLattice& lattice,
                                                std::string_view role) {
    if (!v.is_object())
        throw ValidationError(where + " must be an object");
    std::map<std::string, std::string> out;
    for (const auto& item : v.items()) {
        auto label = as_string(item.value(), where + "." + item.key());
        if (!lattice.contains(label))
            throw ValidationError(std::string(role) + " '" + item.key() + "' in " + where +
                                  " is assigned unknown label '" + label + "'");
        out.emplace(item.key(), std::move(label));
    }
    return out;
}

PolicyBlock parse_block(const json& v, const std::string& path, const ClearanceScale& scale,
                        const AccessUniverse& universe, bool integrity) {
    if (!v.is_object())
        throw ValidationError(path + " must be an object");
    if (integrity)
        reject_unknown_keys(v, path,
                            {"lattice", "subject_labels", "object_labels", "matrix",
                             "mandatory_scale", "discretionary_scale", "invert_direction"});
    else
        reject_unknown_keys(v, path,
                            {"lattice", "subject_labels", "object_labels", "matrix",
                             "mandatory_scale", "discretionary_scale"});

    auto lattice = parse_lattice(require_object(v, "lattice", path), path + ".lattice");
    LabelAssignment labels;
    labels.subject_labels = parse_labels(require(v, "subject_labels", path),
                                         path + ".subject_labels", lattice, "subject");
    labels.object_labels = parse_labels(require(v, "object_labels", path),
                                        path + ".object_labels", lattice, "object");

    AccessMatrix matrix;
    const json& cells = require(v, "matrix", path);
    if (!cells.is_object())
        throw ValidationError(path + ".matrix must be an object");
    for (const auto& item : cells.items()) {
        const auto where = path + ".matrix." + item.key();
        auto [subject, object] = parse_cell_key(item.key(), path + ".matrix");
        AccessSet types;
        for (auto& t : as_string_list(item.value(), where)) {
            if (!universe.contains(t))
                throw ValidationError(where + ": access type '" + t + "' is not in access_types");
            types.insert(std::move(t));
        }
        matrix.grant(subject, object, std::move(types));
    }

    auto block_scale = [&](const char* key) {
        auto it = v.find(key);
        if (it == v.end())
            return scale;
        auto s = parse_scale(*it, path + "." + key);
        if (s.m() > scale.m())
            throw ValidationError(path + "." + key + ".m exceeds the global scale m=" +
                                  std::to_string(scale.m()));
        return s;
    };

    Direction direction = Direction::standard;
    if (auto it = v.find("invert_direction"); it != v.end()) {
        if (!it->is_boolean())
            throw ValidationError(path + ".invert_direction must be a boolean");
        direction = it->get<bool>() ? Direction::inverted : Direction::standard;
    }

    return PolicyBlock{std::move(lattice),           std::move(labels),
                       std::move(matrix),            block_scale("mandatory_scale"),
                       block_scale("discretionary_scale"), direction};
}

CombinerParams parse_params(Mode mode, const json& v, const std::string& path) {
    if (!v.is_object())
        throw ModeMismatchError(path + " must be an object");
    const auto& names = parameter_names(mode);
    for (const auto& item : v.items()) {
        if (std::find(names.begin(), names.end(), item.key()) == names.end())
            throw ModeMismatchError("parameter '" + item.key() + "' does not belong to mode '" +
                                    std::string(to_string(mode)) + "'");
    }
    CombinerParams params;
    switch (mode) {
    case Mode::weighted: params = WeightedConfig{}; break;
    case Mode::ahp_fig1: params = AhpConfigFig1{}; break;
    case Mode::ahp_fig2: params = AhpConfigFig2{}; break;
    }
    for (const auto& name : names) {
        auto it = v.find(name);
        if (it == v.end())
            throw ModeMismatchError("mode '" + std::string(to_string(mode)) +
                                    "' requires parameter '" + name + "' in " + path);
        params = with_parameter(params, name, as_positive_ratio(*it, path + "." + name));
    }
    return params;
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t offset) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

} // namespace

LoadedConfig load_config(std::string_view bytes) {
    json root;
    try {
        root = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        // e.byte is 1-based and points at the offending character.
        auto [line, column] = line_and_column(bytes, e.byte == 0 ? 0 : e.byte - 1);
        std::string msg = e.what();
        if (auto pos = msg.find("parse error"); pos != std::string::npos)
            msg = msg.substr(pos);
        throw ParseError(msg, line, column);
    }
    if (!root.is_object())
        throw ValidationError("config root must be an object");
    reject_unknown_keys(root, "config",
                        {"scale", "access_types", "mode", "combiner", "confidentiality",
                         "integrity", "overrides"});

    const auto scale = parse_scale(require(root, "scale", "config"), "scale");
    const AccessUniverse universe = [&] {
        try {
            return AccessUniverse(as_string_list(require(root, "access_types", "config"),
                                                 "access_types"));
        } catch (const ValidationError& e) {
            throw ValidationError(std::string("access_types: ") + e.what());
        }
    }();

    const auto mode_text = as_string(require(root, "mode", "config"), "mode");
    const auto mode = parse_mode(mode_text);
    if (!mode)
        throw ValidationError("unknown mode '" + mode_text +
                              "' (expected weighted, ahp_fig1 or ahp_fig2)");

    const json& combiner = require(root, "combiner", "config");
    if (!combiner.is_object())
        throw ValidationError("combiner must be an object keyed by mode");
    std::optional<CombinerParams> params;
    for (const auto& item : combiner.items()) {
        auto entry_mode = parse_mode(item.key());
        if (!entry_mode)
            throw ValidationError("combiner has entry for unknown mode '" + item.key() + "'");
        auto parsed = parse_params(*entry_mode, item.value(), "combiner." + item.key());
        if (*entry_mode == *mode)
            params = parsed;
    }
    if (!params)
        throw ModeMismatchError("combiner has no parameters for mode '" + mode_text + "'");

    auto confidentiality =
        parse_block(require(root, "confidentiality", "config"), "confidentiality", scale, universe,
                    false);
    std::optional<PolicyBlock> integrity;
    if (auto it = root.find("integrity"); it != root.end())
        integrity = parse_block(*it, "integrity", scale, universe, true);
    if (*mode != Mode::weighted && !integrity)
        throw ModeMismatchError("mode '" + mode_text + "' requires an integrity policy block");

    std::map<CellKey, double> overrides;
    if (auto it = root.find("overrides"); it != root.end()) {
        if (!it->is_object())
            throw ValidationError("overrides must be an object");
        for (const auto& item : it->items()) {
            const auto where = "overrides." + item.key();
            if (!item.value().is_number())
                throw ValidationError(where + " must be a number");
            const double value = item.value().get<double>();
            if (!scale.contains(value))
                throw ValidationError(where + " = " + item.value().dump() + " lies outside [-" +
                                      std::to_string(scale.m()) + ", " +
                                      std::to_string(scale.m()) + "]");
            overrides.emplace(parse_cell_key(item.key(), "overrides"), value);
        }
    }

    return LoadedConfig{
        EngineConfig{scale, universe, *mode, *params, std::move(confidentiality),
                     std::move(integrity), std::move(overrides)},
        fingerprint(bytes)};
}

LoadedConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw IoError("failed reading config file '" + path.string() + "'");
    return load_config(buf.str());
}

} // namespace polycomb
