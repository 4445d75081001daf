#include <charconv>
#include <cstdio>
#include <sstream>

#include "lcp/trainer.hpp"
#include "lcp/util.hpp"

namespace lcp {
namespace {

std::string format_double(double v) {
    // shortest text that reads back to the same double
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw DataError("config: '" + key + "' expects a number, got '" + value + "'");
    }
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw DataError("config: '" + key + "' expects a non-negative integer, got '" + value + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true") return true;
    if (value == "0" || value == "false") return false;
    throw DataError("config: '" + key + "' expects true/false, got '" + value + "'");
}

}  // namespace

const char* to_string(TrainMode mode) {
    switch (mode) {
        case TrainMode::vanilla: return "vanilla";
        case TrainMode::preced: return "preced";
        case TrainMode::preced_provis: return "preced_provis";
        case TrainMode::frozen: return "frozen";
    }
    return "?";
}

TrainMode parse_train_mode(const std::string& name) {
    if (name == "vanilla") return TrainMode::vanilla;
    if (name == "preced") return TrainMode::preced;
    if (name == "preced_provis" || name == "preced+provis") return TrainMode::preced_provis;
    if (name == "frozen") return TrainMode::frozen;
    throw DataError("unknown training mode: " + name);
}

void TrainConfig::validate() const {
    if (batch_size == 0) throw DataError("batch_size must be positive");
    if (!(learning_rate > 0.0)) throw DataError("learning_rate must be positive");
    if (weight_decay < 0.0) throw DataError("weight_decay must be non-negative");
    if (recluster_every == 0) throw DataError("recluster_every must be positive");
    if (k == 0) throw DataError("k must be positive");
    if (embed_dim < 2 || hash_dim < embed_dim) throw DataError("need embed_dim >= 2 and hash_dim >= embed_dim");
    if (!(init_scale > 0.0)) throw DataError("init_scale must be positive");
    weights.validate();
}

void apply_config(TrainConfig& c, const std::map<std::string, std::string>& values) {
    for (const auto& [key, value] : values) {
        if (key == "mode") c.mode = parse_train_mode(value);
        else if (key == "epochs") c.epochs = parse_unsigned(key, value);
        else if (key == "batch_size") c.batch_size = parse_unsigned(key, value);
        else if (key == "learning_rate") c.learning_rate = parse_double(key, value);
        else if (key == "weight_decay") c.weight_decay = parse_double(key, value);
        else if (key == "recluster_every") c.recluster_every = parse_unsigned(key, value);
        else if (key == "k") c.k = parse_unsigned(key, value);
        else if (key == "lambda1") c.weights.lambda1 = parse_double(key, value);
        else if (key == "lambda2") c.weights.lambda2 = parse_double(key, value);
        else if (key == "lambda3") c.weights.lambda3 = parse_double(key, value);
        else if (key == "delta") c.weights.delta = parse_double(key, value);
        else if (key == "epsilon") c.weights.epsilon = parse_double(key, value);
        else if (key == "s_max") c.weights.s_max = parse_double(key, value);
        else if (key == "s_min") c.weights.s_min = parse_double(key, value);
        else if (key == "seed") c.seed = parse_unsigned(key, value);
        else if (key == "hash_dim") c.hash_dim = parse_unsigned(key, value);
        else if (key == "embed_dim") c.embed_dim = parse_unsigned(key, value);
        else if (key == "init_scale") c.init_scale = parse_double(key, value);
        else if (key == "head_uses_provisions") c.head_uses_provisions = parse_bool(key, value);
        else if (key == "jobs") c.jobs = static_cast<unsigned>(parse_unsigned(key, value));
        else throw DataError("config: unknown key '" + key + "'");
    }
}

std::map<std::string, std::string> to_key_values(const TrainConfig& c) {
    return {
        {"mode", to_string(c.mode)},
        {"epochs", std::to_string(c.epochs)},
        {"batch_size", std::to_string(c.batch_size)},
        {"learning_rate", format_double(c.learning_rate)},
        {"weight_decay", format_double(c.weight_decay)},
        {"recluster_every", std::to_string(c.recluster_every)},
        {"k", std::to_string(c.k)},
        {"lambda1", format_double(c.weights.lambda1)},
        {"lambda2", format_double(c.weights.lambda2)},
        {"lambda3", format_double(c.weights.lambda3)},
        {"delta", format_double(c.weights.delta)},
        {"epsilon", format_double(c.weights.epsilon)},
        {"s_max", format_double(c.weights.s_max)},
        {"s_min", format_double(c.weights.s_min)},
        {"seed", std::to_string(c.seed)},
        {"hash_dim", std::to_string(c.hash_dim)},
        {"embed_dim", std::to_string(c.embed_dim)},
        {"init_scale", format_double(c.init_scale)},
        {"head_uses_provisions", c.head_uses_provisions ? "true" : "false"},
        {"jobs", std::to_string(c.jobs)},
    };
}

std::map<std::string, std::string> parse_key_value_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DataError("config line " + std::to_string(number) + ": expected key=value");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw DataError("config line " + std::to_string(number) + ": empty key");
        out[std::move(key)] = std::move(value);
    }
    return out;
}

}  // namespace lcp
