#include "wecs/timeseries.hpp"

#include "wecs/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace wecs {
namespace {

std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += ch;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

double parse_number(std::string_view text, std::size_t line_no)
{
    while (!text.empty() && text.front() == ' ')
        text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ')
        text.remove_suffix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ValidationError("CSV line " + std::to_string(line_no) + ": not a number: '" + std::string{text} + "'");
    return value;
}

void append_field(std::string& out, std::string_view name)
{
    if (name.find_first_of(",\"\r\n") == std::string_view::npos) {
        out += name;
        return;
    }
    out += '"';
    for (char ch : name) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    out += '"';
}

} // namespace

std::string format_number(double value)
{
    std::string out;
    append_number(out, value);
    return out;
}

void append_number(std::string& out, double value)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    out.append(buf, ptr);
}

TimeSeries::TimeSeries(std::vector<std::string> channel_names)
    : names_(std::move(channel_names)), columns_(names_.size())
{
}

void TimeSeries::reserve(std::size_t rows)
{
    time_.reserve(rows);
    for (auto& c : columns_)
        c.reserve(rows);
}

void TimeSeries::append(double t, std::span<const double> values)
{
    if (values.size() != names_.size())
        throw ValidationError("row width does not match channel count");
    if (!std::isfinite(t))
        throw NumericalError("non-finite sample time");
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            throw NumericalError("non-finite value in channel " + names_[i] + " at t = " + format_number(t));
    time_.push_back(t);
    for (std::size_t i = 0; i < values.size(); ++i)
        columns_[i].push_back(values[i]);
}

bool TimeSeries::has_channel(std::string_view name) const
{
    for (const auto& n : names_)
        if (n == name)
            return true;
    return false;
}

const std::vector<double>& TimeSeries::channel(std::string_view name) const
{
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name)
            return columns_[i];
    throw ValidationError("unknown channel '" + std::string{name} + "'");
}

double TimeSeries::uniform_step() const
{
    if (time_.size() < 2)
        throw ValidationError("time series needs at least two samples");
    const double dt = (time_.back() - time_.front()) / static_cast<double>(time_.size() - 1);
    if (!(dt > 0.0))
        throw ValidationError("time column is not increasing");
    for (std::size_t i = 1; i < time_.size(); ++i) {
        const double step = time_[i] - time_[i - 1];
        if (std::abs(step - dt) > 1e-6 * dt)
            throw ValidationError("time column is not uniformly sampled near t = " + format_number(time_[i]));
    }
    return dt;
}

std::string TimeSeries::to_csv() const
{
    std::string out;
    out.reserve((time_.size() + 1) * (names_.size() + 1) * 16);
    out += 't';
    for (const auto& n : names_) {
        out += ',';
        append_field(out, n);
    }
    out += "\r\n";
    for (std::size_t r = 0; r < time_.size(); ++r) {
        append_number(out, time_[r]);
        for (const auto& c : columns_) {
            out += ',';
            append_number(out, c[r]);
        }
        out += "\r\n";
    }
    return out;
}

void TimeSeries::write_csv(const std::filesystem::path& path) const
{
    std::ofstream file{path, std::ios::binary};
    if (!file)
        throw ValidationError("cannot open '" + path.string() + "' for writing");
    const std::string text = to_csv();
    file.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!file)
        throw ValidationError("failed writing '" + path.string() + "'");
}

TimeSeries TimeSeries::from_csv(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (!line.empty())
            lines.push_back(line);
        start = end + 1;
    }
    if (lines.empty())
        throw ValidationError("CSV is empty");

    auto header = split_csv_line(lines.front());
    if (header.empty() || header.front() != "t")
        throw ValidationError("CSV header must start with a 't' column");
    TimeSeries series{std::vector<std::string>(header.begin() + 1, header.end())};
    series.reserve(lines.size() - 1);
    std::vector<double> row(series.channel_count());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != header.size())
            throw ValidationError("CSV line " + std::to_string(i + 1) + " has " + std::to_string(fields.size()) +
                                  " fields, expected " + std::to_string(header.size()));
        const double t = parse_number(fields[0], i + 1);
        for (std::size_t c = 1; c < fields.size(); ++c)
            row[c - 1] = parse_number(fields[c], i + 1);
        series.append(t, row);
    }
    return series;
}

TimeSeries TimeSeries::read_csv(const std::filesystem::path& path)
{
    std::ifstream file{path, std::ios::binary};
    if (!file)
        throw ValidationError("cannot open CSV file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return from_csv(buffer.str());
}

} // namespace wecs
