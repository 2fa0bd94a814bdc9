#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "itw/linalg.hpp"

namespace itw {

/// Fixed decimal formatting used everywhere a number reaches an output file:
/// 17 significant digits round-trip doubles and keep reports byte-stable.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Minimal JSON emitter with caller-controlled field order.
class JsonWriter {
public:
    JsonWriter& begin_object() {
        comma();
        out_ << '{';
        fresh_.push_back(true);
        return *this;
    }
    JsonWriter& end_object() {
        out_ << '}';
        fresh_.pop_back();
        return *this;
    }
    JsonWriter& begin_array() {
        comma();
        out_ << '[';
        fresh_.push_back(true);
        return *this;
    }
    JsonWriter& end_array() {
        out_ << ']';
        fresh_.pop_back();
        return *this;
    }
    JsonWriter& key(const std::string& k) {
        comma();
        write_string(k);
        out_ << ':';
        pending_value_ = true;
        return *this;
    }
    JsonWriter& value(double v) {
        comma();
        out_ << format_double(v);
        return *this;
    }
    JsonWriter& value(int v) {
        comma();
        out_ << v;
        return *this;
    }
    JsonWriter& value(long long v) {
        comma();
        out_ << v;
        return *this;
    }
    JsonWriter& value(unsigned long long v) {
        comma();
        out_ << v;
        return *this;
    }
    JsonWriter& value(bool v) {
        comma();
        out_ << (v ? "true" : "false");
        return *this;
    }
    JsonWriter& value(const std::string& v) {
        comma();
        write_string(v);
        return *this;
    }
    JsonWriter& value(const char* v) { return value(std::string(v)); }
    JsonWriter& raw(const std::string& token) {
        comma();
        out_ << token;
        return *this;
    }

    std::string str() const { return out_.str(); }

private:
    void comma() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (!fresh_.empty()) {
            if (!fresh_.back()) out_ << ',';
            fresh_.back() = false;
        }
    }
    void write_string(const std::string& s) {
        out_ << '"';
        for (char c : s) {
            switch (c) {
                case '"': out_ << "\\\""; break;
                case '\\': out_ << "\\\\"; break;
                case '\n': out_ << "\\n"; break;
                case '\t': out_ << "\\t"; break;
                case '\r': out_ << "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        out_ << buf;
                    } else {
                        out_ << c;
                    }
            }
        }
        out_ << '"';
    }

    std::ostringstream out_;
    std::vector<bool> fresh_;
    bool pending_value_ = false;
};

/// Matrix interchange format: {"dim": d, "entries": [[re, im], ...]},
/// row-major, d² entries.
inline std::string matrix_to_json(const Matrix& m) {
    require_square(m, "matrix_to_json");
    JsonWriter w;
    w.begin_object();
    w.key("dim").value(static_cast<int>(m.rows()));
    w.key("entries").begin_array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            w.begin_array();
            w.value(m(i, j).real());
            w.value(m(i, j).imag());
            w.end_array();
        }
    w.end_array();
    w.end_object();
    return w.str();
}

inline Matrix matrix_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("matrix_from_json: ") + e.what());
    }
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
        throw ParseError("matrix_from_json: expected object with dim and entries");
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() <= 0)
        throw ParseError("matrix_from_json: dim must be a positive integer");
    const auto d = j["dim"].get<Eigen::Index>();
    const auto& entries = j["entries"];
    if (!entries.is_array() || entries.size() != static_cast<size_t>(d * d))
        throw ParseError("matrix_from_json: entries must hold dim^2 pairs");
    Matrix m(d, d);
    size_t k = 0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j2 = 0; j2 < d; ++j2, ++k) {
            const auto& e = entries[k];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ParseError("matrix_from_json: entry " + std::to_string(k) +
                                 " is not a [re, im] pair");
            const double re = e[0].get<double>();
            const double im = e[1].get<double>();
            if (!std::isfinite(re) || !std::isfinite(im))
                throw ParseError("matrix_from_json: non-finite entry");
            m(i, j2) = Complex(re, im);
        }
    return m;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Matrix load_matrix(const std::string& path) { return matrix_from_json(read_file(path)); }

/// Write-then-rename so readers never observe a half-written report.
inline void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open output file: " + tmp.string());
        out << content;
        if (!out.good()) throw Error("failed writing: " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace itw
