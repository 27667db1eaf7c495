#pragma once

#include "common.hpp"
#include "trace_io.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace graphsl {

// One externally scored post: three sentiment probabilities attached to an
// agent and a UTC instant (seconds since the epoch).
struct SentimentRecord {
    std::string agent_id;
    long long timestamp = 0;
    double p_neg = 0.0;
    double p_neu = 0.0;
    double p_pos = 0.0;
};

// Collapses the three-way sentiment into the probability of the positive
// side of the polar mass, clamped away from 0 and 1 so log ratios stay
// bounded. Records with no polar mass at all carry no signal and are
// reported as empty so the caller can drop them.
inline std::optional<double> binary_positive_prob(const SentimentRecord& record) {
    const double polar = record.p_neg + record.p_pos;
    if (polar <= 0.0) return std::nullopt;
    const double p = record.p_pos / polar;
    return std::min(1.0 - 1e-4, std::max(1e-4, p));
}

namespace detail {

inline long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

inline bool leap_year(int y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

inline int days_in_month(int y, int m) {
    static constexpr int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && leap_year(y)) return 29;
    return lengths[m - 1];
}

inline int parse_fixed_digits(const std::string& text, std::size_t pos, int width) {
    int value = 0;
    for (int i = 0; i < width; ++i) {
        const char c = pos + static_cast<std::size_t>(i) < text.size()
                           ? text[pos + static_cast<std::size_t>(i)]
                           : '\0';
        require(c >= '0' && c <= '9', "timestamp digit expected in '" + text + "'");
        value = value * 10 + (c - '0');
    }
    return value;
}

}  // namespace detail

// Strict ISO 8601 parser for 'YYYY-MM-DDTHH:MM:SS' with an optional
// fractional-second part (truncated) and an optional zone suffix: none or
// 'Z' for UTC, or a numeric offset in the forms +HH:MM / +HHMM.
inline long long parse_iso8601(const std::string& text) {
    require(text.size() >= 19, "timestamp too short: '" + text + "'");
    require(text[4] == '-' && text[7] == '-' && text[10] == 'T' && text[13] == ':' &&
                text[16] == ':',
            "timestamp separators malformed in '" + text + "'");
    const int year = detail::parse_fixed_digits(text, 0, 4);
    const int month = detail::parse_fixed_digits(text, 5, 2);
    const int day = detail::parse_fixed_digits(text, 8, 2);
    const int hour = detail::parse_fixed_digits(text, 11, 2);
    const int minute = detail::parse_fixed_digits(text, 14, 2);
    const int second = detail::parse_fixed_digits(text, 17, 2);
    require(month >= 1 && month <= 12, "month out of range in '" + text + "'");
    require(day >= 1 && day <= detail::days_in_month(year, month),
            "day out of range in '" + text + "'");
    require(hour <= 23 && minute <= 59 && second <= 59,
            "time of day out of range in '" + text + "'");

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t digits = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            ++pos;
            ++digits;
        }
        require(digits > 0, "empty fractional seconds in '" + text + "'");
    }

    long long zone_seconds = 0;
    if (pos < text.size()) {
        const char z = text[pos];
        if (z == 'Z') {
            ++pos;
        } else if (z == '+' || z == '-') {
            ++pos;
            const int zh = detail::parse_fixed_digits(text, pos, 2);
            pos += 2;
            if (pos < text.size() && text[pos] == ':') ++pos;
            const int zm = detail::parse_fixed_digits(text, pos, 2);
            pos += 2;
            require(zh <= 23 && zm <= 59, "zone offset out of range in '" + text + "'");
            zone_seconds = (z == '+' ? 1 : -1) * (zh * 3600LL + zm * 60LL);
        }
    }
    require(pos == text.size(), "trailing characters in timestamp '" + text + "'");

    const long long days = detail::days_from_civil(year, month, day);
    return days * 86400LL + hour * 3600LL + minute * 60LL + second - zone_seconds;
}

// Calendar-day bucket of a UTC instant after shifting by the configured
// offset; floor semantics so pre-epoch instants bucket consistently.
inline long day_index(long long timestamp, double tz_offset_hours = 0.0) {
    const long long shifted =
        timestamp + static_cast<long long>(std::llround(tz_offset_hours * 3600.0));
    long long q = shifted / 86400;
    if (shifted % 86400 < 0) --q;
    return static_cast<long>(q);
}

// Daily per-agent log-belief ratios in the two-hypothesis setting: one row
// per calendar day, one column per agent in lexicographic id order.
struct BeliefSeries {
    std::vector<std::string> agents;
    long first_day = 0;
    Matrix values;
};

// Buckets posts into days, averages each day's log ratios per agent, and
// fills silent days with the previous value (zero before an agent's first
// post). Records without polar mass are dropped and optionally counted.
inline BeliefSeries build_belief_series(const std::vector<SentimentRecord>& records,
                                        double tz_offset_hours = 0.0,
                                        std::size_t* dropped_records = nullptr) {
    struct Kept {
        std::string agent;
        long day;
        double log_ratio;
    };
    std::vector<Kept> kept;
    kept.reserve(records.size());
    std::size_t dropped = 0;
    for (const auto& record : records) {
        const std::optional<double> p = binary_positive_prob(record);
        if (!p) {
            ++dropped;
            continue;
        }
        kept.push_back(Kept{record.agent_id, day_index(record.timestamp, tz_offset_hours),
                            std::log(*p / (1.0 - *p))});
    }
    if (dropped_records) *dropped_records = dropped;
    require(!kept.empty(), "no usable sentiment records");

    std::map<std::string, int> columns;
    long lo = kept.front().day, hi = kept.front().day;
    for (const auto& k : kept) {
        columns.emplace(k.agent, 0);
        lo = std::min(lo, k.day);
        hi = std::max(hi, k.day);
    }
    int next = 0;
    for (auto& entry : columns) entry.second = next++;

    const Eigen::Index rows = hi - lo + 1;
    const Eigen::Index cols = static_cast<Eigen::Index>(columns.size());
    Matrix sums = Matrix::Zero(rows, cols);
    Matrix counts = Matrix::Zero(rows, cols);
    for (const auto& k : kept) {
        const Eigen::Index row = k.day - lo;
        const Eigen::Index col = columns.at(k.agent);
        sums(row, col) += k.log_ratio;
        counts(row, col) += 1.0;
    }

    BeliefSeries series;
    series.agents.reserve(columns.size());
    for (const auto& entry : columns) series.agents.push_back(entry.first);
    series.first_day = lo;
    series.values.resize(rows, cols);
    for (Eigen::Index col = 0; col < cols; ++col) {
        double carried = 0.0;
        for (Eigen::Index row = 0; row < rows; ++row) {
            if (counts(row, col) > 0.0) carried = sums(row, col) / counts(row, col);
            series.values(row, col) = carried;
        }
    }
    return series;
}

// One single-column matrix per day, agents in series column order.
inline std::vector<Matrix> lambda_frames(const BeliefSeries& series) {
    std::vector<Matrix> frames;
    frames.reserve(static_cast<std::size_t>(series.values.rows()));
    for (Eigen::Index row = 0; row < series.values.rows(); ++row)
        frames.push_back(series.values.row(row).transpose());
    return frames;
}

inline void export_trace(const BeliefSeries& series, const std::string& path) {
    write_lambda_trace(path, lambda_frames(series));
}

// Reads the post table: header agent_id,timestamp_iso8601,p_neg,p_neu,p_pos,
// then one post per line. Probabilities must lie in [0, 1] and sum to one
// within 1e-6. Windows line endings and blank lines are tolerated.
inline std::vector<SentimentRecord> read_sentiment_csv(std::istream& in) {
    const auto strip_cr = [](std::string& line) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "sentiment csv is empty");
    strip_cr(line);
    require(line == "agent_id,timestamp_iso8601,p_neg,p_neu,p_pos",
            "unexpected sentiment csv header: '" + line + "'");

    std::vector<SentimentRecord> records;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t pos = 0; pos <= line.size(); ++pos) {
            if (pos == line.size() || line[pos] == ',') {
                fields.push_back(line.substr(start, pos - start));
                start = pos + 1;
            }
        }
        const std::string where = "sentiment csv line " + std::to_string(line_no);
        require(fields.size() == 5, where + ": expected 5 fields, got " +
                                        std::to_string(fields.size()));
        require(!fields[0].empty(), where + ": empty agent id");

        SentimentRecord record;
        record.agent_id = fields[0];
        try {
            record.timestamp = parse_iso8601(fields[1]);
        } catch (const std::invalid_argument& err) {
            throw std::invalid_argument(where + ": " + err.what());
        }
        double* slots[3] = {&record.p_neg, &record.p_neu, &record.p_pos};
        for (int i = 0; i < 3; ++i) {
            const std::string& field = fields[static_cast<std::size_t>(i) + 2];
            std::size_t used = 0;
            double value = 0.0;
            try {
                value = std::stod(field, &used);
            } catch (const std::exception&) {
                throw std::invalid_argument(where + ": bad probability '" + field + "'");
            }
            require(used == field.size(), where + ": bad probability '" + field + "'");
            require(value >= 0.0 && value <= 1.0,
                    where + ": probability out of range '" + field + "'");
            *slots[i] = value;
        }
        require(std::abs(record.p_neg + record.p_neu + record.p_pos - 1.0) <= 1e-6,
                where + ": probabilities do not sum to one");
        records.push_back(std::move(record));
    }
    return records;
}

inline std::vector<SentimentRecord> read_sentiment_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), "cannot open " + path);
    return read_sentiment_csv(in);
}

}  // namespace graphsl
