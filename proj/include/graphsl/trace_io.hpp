#pragma once

#include "simulator.hpp"

#include <json.hpp>
#include <zlib.h>

#include <fstream>
#include <string>
#include <vector>

namespace graphsl {

namespace detail {

inline bool gz_path(const std::string& path) {
    return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

// Line-oriented sink/source pair that switches to gzip framing on .gz paths.
class LineWriter {
public:
    explicit LineWriter(const std::string& path) : gz_(gz_path(path)) {
        if (gz_) {
            file_ = gzopen(path.c_str(), "wb");
            if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
        } else {
            stream_.open(path, std::ios::binary);
            if (!stream_) throw std::runtime_error("cannot open " + path + " for writing");
        }
    }
    ~LineWriter() {
        if (gz_ && file_) gzclose(file_);
    }
    LineWriter(const LineWriter&) = delete;
    LineWriter& operator=(const LineWriter&) = delete;

    void line(const std::string& text) {
        if (gz_) {
            if (gzwrite(file_, text.data(), static_cast<unsigned>(text.size())) !=
                    static_cast<int>(text.size()) ||
                gzwrite(file_, "\n", 1) != 1)
                throw std::runtime_error("gzip write failed");
        } else {
            stream_ << text << '\n';
            if (!stream_) throw std::runtime_error("trace write failed");
        }
    }

private:
    bool gz_;
    gzFile file_ = nullptr;
    std::ofstream stream_;
};

class LineReader {
public:
    explicit LineReader(const std::string& path) : gz_(gz_path(path)) {
        if (gz_) {
            file_ = gzopen(path.c_str(), "rb");
            if (!file_) throw std::runtime_error("cannot open " + path);
        } else {
            stream_.open(path, std::ios::binary);
            if (!stream_) throw std::runtime_error("cannot open " + path);
        }
    }
    ~LineReader() {
        if (gz_ && file_) gzclose(file_);
    }
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    bool line(std::string& out) {
        if (!gz_) return static_cast<bool>(std::getline(stream_, out));
        out.clear();
        char buf[1 << 16];
        while (gzgets(file_, buf, sizeof buf)) {
            out += buf;
            if (!out.empty() && out.back() == '\n') {
                out.pop_back();
                return true;
            }
        }
        return !out.empty();
    }

private:
    bool gz_;
    gzFile file_ = nullptr;
    std::ifstream stream_;
};

inline nlohmann::json lambda_to_json(const Matrix& lambda) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index k = 0; k < lambda.rows(); ++k) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < lambda.cols(); ++j) row.push_back(lambda(k, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

struct LoadedTraceRecord {
    long iteration = 0;
    Matrix lambda;
    std::vector<int> map;
    bool has_map = false;
    int theta_star = 0;
    bool has_theta_star = false;
};

struct LoadedTrace {
    std::vector<LoadedTraceRecord> records;
    int agents = 0;
    int width = 0;  // columns of lambda, one per non-reference hypothesis
};

inline void write_trace_jsonl(const std::string& path, const SimulationTrace& trace) {
    detail::LineWriter out(path);
    for (const auto& rec : trace.records) {
        nlohmann::json j;
        j["i"] = rec.iteration;
        j["lambda"] = detail::lambda_to_json(rec.lambda);
        j["map"] = rec.map;
        j["theta_star"] = rec.theta_star;
        out.line(j.dump());
    }
}

// Reduced form used by the ingestion pipeline: no map or true-state fields.
inline void write_lambda_trace(const std::string& path, const std::vector<Matrix>& lambdas) {
    detail::LineWriter out(path);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        nlohmann::json j;
        j["i"] = i;
        j["lambda"] = detail::lambda_to_json(lambdas[i]);
        out.line(j.dump());
    }
}

inline LoadedTrace read_trace_jsonl(const std::string& path) {
    detail::LineReader in(path);
    LoadedTrace trace;
    std::string text;
    long expected = 0;
    while (in.line(text)) {
        if (text.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(text);
        require(j.contains("i") && j.contains("lambda"), "trace record needs 'i' and 'lambda'");
        LoadedTraceRecord rec;
        rec.iteration = j.at("i").get<long>();
        require(rec.iteration == expected, "trace iterations must be contiguous from 0");
        ++expected;
        const auto& rows = j.at("lambda");
        require(rows.is_array() && !rows.empty(), "trace lambda must be a non-empty array");
        const int n = static_cast<int>(rows.size());
        const int width = static_cast<int>(rows.at(0).size());
        require(width >= 1, "trace lambda rows must be non-empty");
        rec.lambda.resize(n, width);
        for (int k = 0; k < n; ++k) {
            const auto row = rows.at(static_cast<std::size_t>(k)).get<std::vector<double>>();
            require(static_cast<int>(row.size()) == width, "ragged trace lambda row");
            for (int j2 = 0; j2 < width; ++j2) {
                require(std::isfinite(row[static_cast<std::size_t>(j2)]),
                        "trace lambda entries must be finite");
                rec.lambda(k, j2) = row[static_cast<std::size_t>(j2)];
            }
        }
        if (trace.records.empty()) {
            trace.agents = n;
            trace.width = width;
        } else {
            require(n == trace.agents && width == trace.width,
                    "trace record shape changed mid-stream");
        }
        if (j.contains("map")) {
            rec.map = j.at("map").get<std::vector<int>>();
            require(static_cast<int>(rec.map.size()) == n, "trace map length mismatch");
            rec.has_map = true;
        }
        if (j.contains("theta_star")) {
            rec.theta_star = j.at("theta_star").get<int>();
            rec.has_theta_star = true;
        }
        trace.records.push_back(std::move(rec));
    }
    require(!trace.records.empty(), "trace file holds no records");
    return trace;
}

}  // namespace graphsl
