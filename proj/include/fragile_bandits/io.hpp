#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fragile_bandits/errors.hpp"
#include "fragile_bandits/geometry.hpp"

namespace fragile_bandits {

using Json = nlohmann::ordered_json;

/// 17 significant digits: round-trips every double exactly.
inline std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline Json instance_to_json(const Instance& inst) {
    Json j;
    j["d"] = inst.d;
    j["beta"] = inst.beta;
    j["actions"] = inst.actions;
    j["parameters"] = inst.parameters;
    j["prior"] = inst.prior;
    j["optimal_map"] = inst.optimal_map;
    return j;
}

inline Instance instance_from_json(const Json& j) {
    Instance inst;
    inst.d = j.at("d").get<size_t>();
    inst.beta = j.at("beta").get<double>();
    inst.actions = j.at("actions").get<std::vector<Vec>>();
    inst.parameters = j.at("parameters").get<std::vector<Vec>>();
    if (!j.contains("prior") || (j["prior"].is_string() && j["prior"] == "uniform")) {
        inst.prior = uniform_prior(inst.parameters.size());
    } else {
        inst.prior = j.at("prior").get<std::vector<double>>();
    }
    if (j.contains("optimal_map") && !j["optimal_map"].is_null()) {
        inst.optimal_map = j.at("optimal_map").get<std::vector<size_t>>();
    } else {
        inst.optimal_map = derive_optimal_map(inst.actions, inst.parameters);
    }
    return inst;
}

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open file: " + path);
    Json j;
    in >> j;
    return j;
}

inline Instance load_instance(const std::string& path) {
    Json j = load_json(path);
    return instance_from_json(j);
}

inline void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write file: " + path);
    out << text;
}

inline void save_json(const std::string& path, const Json& j) {
    save_text(path, j.dump(2) + "\n");
}

/// Comma-separated, '.' decimal, no locale dependence.  The resolved
/// config travels in a leading '#' comment line so any output can be
/// reproduced from the file alone.
class CsvWriter {
public:
    void comment(const std::string& text) { out_ << "# " << text << "\n"; }

    void header(const std::vector<std::string>& cols) {
        for (size_t i = 0; i < cols.size(); ++i) {
            if (i) out_ << ',';
            out_ << cols[i];
        }
        out_ << "\n";
    }

    class Row {
    public:
        explicit Row(std::ostringstream& out) : out_(out) {}
        Row& cell(const std::string& s) {
            sep();
            out_ << s;
            return *this;
        }
        Row& cell(double x) { return cell(fmt_double(x)); }
        Row& cell(size_t x) { return cell(std::to_string(x)); }
        Row& cell(int x) { return cell(std::to_string(x)); }
        ~Row() { out_ << "\n"; }

    private:
        void sep() {
            if (!first_) out_ << ',';
            first_ = false;
        }
        std::ostringstream& out_;
        bool first_ = true;
    };

    Row row() { return Row(out_); }

    std::string str() const { return out_.str(); }

    void save(const std::string& path) const { save_text(path, out_.str()); }

private:
    std::ostringstream out_;
};

}  // namespace fragile_bandits
