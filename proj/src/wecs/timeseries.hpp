#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wecs {

/// Uniformly sampled named channels. Column 0 of the CSV form is always "t".
class TimeSeries {
public:
    TimeSeries() = default;
    explicit TimeSeries(std::vector<std::string> channel_names);

    void reserve(std::size_t rows);
    /// Appends one sample; `values` must match the channel count and be finite.
    void append(double t, std::span<const double> values);

    std::size_t rows() const { return time_.size(); }
    std::size_t channel_count() const { return names_.size(); }
    const std::vector<std::string>& channel_names() const { return names_; }
    const std::vector<double>& time() const { return time_; }
    const std::vector<double>& channel(std::size_t index) const { return columns_.at(index); }
    /// Throws ValidationError for an unknown name.
    const std::vector<double>& channel(std::string_view name) const;
    bool has_channel(std::string_view name) const;

    /// Mean sample spacing; ValidationError if spacing is not uniform.
    double uniform_step() const;

    /// RFC-4180 text with a header row. Numbers use the shortest
    /// round-trip representation and '.' as decimal separator.
    std::string to_csv() const;
    void write_csv(const std::filesystem::path& path) const;

    /// Parses a numeric CSV with a header row whose first column is "t".
    static TimeSeries from_csv(std::string_view text);
    static TimeSeries read_csv(const std::filesystem::path& path);

    bool operator==(const TimeSeries&) const = default;

private:
    std::vector<std::string> names_;
    std::vector<double> time_;
    std::vector<std::vector<double>> columns_;
};

/// Shortest representation that parses back to the same double.
std::string format_number(double value);
void append_number(std::string& out, double value);

} // namespace wecs
