#pragma once

#include <string>
#include <utility>
#include <vector>

#include "itw/io.hpp"
#include "itw/partner.hpp"

namespace itw {

/// One executed check. The verdict is derived solely from value vs threshold;
/// `pass_if_below` is false for witness checks that must exceed a floor
/// (e.g. a commutator that has to be visibly nonzero).
struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass_if_below = true;
    bool pass = false;

    static CheckResult below(const std::string& name, double value, double threshold) {
        return {name, value, threshold, true, value <= threshold};
    }
    static CheckResult above(const std::string& name, double value, double threshold) {
        return {name, value, threshold, false, value > threshold};
    }
    static CheckResult boolean(const std::string& name, bool ok) {
        return {name, ok ? 1.0 : 0.0, 0.5, false, ok};
    }
};

/// Machine-readable run report. Field order in the JSON output is fixed and
/// all numbers are printed with 17 significant digits, so identical runs
/// produce byte-identical files.
struct Report {
    std::string command;
    std::string model_name;  // empty unless a single model run
    std::vector<std::pair<std::string, std::string>> parameters;  // value = raw JSON token
    std::string rng_name = "splitmix64";
    std::vector<std::pair<std::string, std::vector<Complex>>> spectra;
    std::vector<std::pair<std::string, std::vector<double>>> value_lists;
    std::vector<std::pair<std::string, std::vector<int>>> index_sets;
    std::vector<SpectralMatch> matched_pairs;
    bool has_matched_pairs = false;
    double frame_lower = 0.0;
    double frame_upper = 0.0;
    bool has_frame_bounds = false;
    std::vector<std::pair<std::string, std::string>> raw_sections;  // pre-rendered JSON
    std::vector<CheckResult> checks;

    void add_param(const std::string& key, long long v) {
        parameters.emplace_back(key, std::to_string(v));
    }
    void add_param(const std::string& key, int v) { add_param(key, static_cast<long long>(v)); }
    void add_param(const std::string& key, unsigned long long v) {
        parameters.emplace_back(key, std::to_string(v));
    }
    void add_param(const std::string& key, double v) {
        parameters.emplace_back(key, format_double(v));
    }
    void add_param_string(const std::string& key, const std::string& v) {
        JsonWriter w;
        w.value(v);
        parameters.emplace_back(key, w.str());
    }

    void add(const CheckResult& c) { checks.push_back(c); }

    void set_frame_bounds(double lower, double upper) {
        frame_lower = lower;
        frame_upper = upper;
        has_frame_bounds = true;
    }

    void set_matched_pairs(const std::vector<SpectralMatch>& m) {
        matched_pairs = m;
        has_matched_pairs = true;
    }

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    std::vector<std::string> failing_checks() const {
        std::vector<std::string> out;
        for (const auto& c : checks)
            if (!c.pass) out.push_back(c.name);
        return out;
    }

    std::string to_json() const {
        JsonWriter w;
        w.begin_object();
        w.key("command").value(command);
        if (!model_name.empty()) w.key("model").value(model_name);
        w.key("parameters").begin_object();
        for (const auto& [k, v] : parameters) w.key(k).raw(v);
        w.end_object();
        w.key("rng").value(rng_name);
        if (!spectra.empty()) {
            w.key("spectra").begin_object();
            for (const auto& [name, vals] : spectra) {
                w.key(name).begin_array();
                for (const auto& z : vals) {
                    w.begin_array();
                    w.value(z.real());
                    w.value(z.imag());
                    w.end_array();
                }
                w.end_array();
            }
            w.end_object();
        }
        if (!value_lists.empty()) {
            w.key("values").begin_object();
            for (const auto& [name, vals] : value_lists) {
                w.key(name).begin_array();
                for (double v : vals) w.value(v);
                w.end_array();
            }
            w.end_object();
        }
        if (!index_sets.empty()) {
            w.key("index_sets").begin_object();
            for (const auto& [name, vals] : index_sets) {
                w.key(name).begin_array();
                for (int v : vals) w.value(v);
                w.end_array();
            }
            w.end_object();
        }
        if (has_frame_bounds) {
            w.key("frame_bounds").begin_array();
            w.value(frame_lower);
            w.value(frame_upper);
            w.end_array();
        }
        for (const auto& [name, token] : raw_sections) w.key(name).raw(token);
        if (has_matched_pairs) {
            w.key("matched_pairs").begin_array();
            for (const auto& m : matched_pairs) {
                w.begin_object();
                w.key("index").value(m.index);
                w.key("family_value").begin_array();
                w.value(m.family_value.real());
                w.value(m.family_value.imag());
                w.end_array();
                w.key("matched").begin_array();
                w.value(m.matched_eigenvalue.real());
                w.value(m.matched_eigenvalue.imag());
                w.end_array();
                w.key("distance").value(m.distance);
                w.end_object();
            }
            w.end_array();
        }
        w.key("checks").begin_array();
        for (const auto& c : checks) {
            w.begin_object();
            w.key("name").value(c.name);
            w.key("value").value(c.value);
            w.key("threshold").value(c.threshold);
            w.key("comparison").value(c.pass_if_below ? "<=" : ">");
            w.key("verdict").value(c.pass ? "pass" : "fail");
            w.end_object();
        }
        w.end_array();
        w.key("verdict").value(all_pass() ? "pass" : "fail");
        w.end_object();
        return w.str() + "\n";
    }

    /// CSV flattening of the residual map: one (check, value, threshold,
    /// verdict) row per executed check.
    std::string to_csv() const {
        std::string out = "check,value,threshold,verdict\n";
        for (const auto& c : checks) {
            out += c.name;
            out += ',';
            out += format_double(c.value);
            out += ',';
            out += format_double(c.threshold);
            out += ',';
            out += c.pass ? "pass" : "fail";
            out += '\n';
        }
        return out;
    }
};

}  // namespace itw
