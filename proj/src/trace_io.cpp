#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "crnrobust/odesim.hpp"

namespace crnrobust {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
    double v = 0.0;
    const auto* first = cell.data();
    const auto* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw std::runtime_error("trace CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'");
    return v;
}

}  // namespace

void write_trace_csv(std::ostream& os, const Trace& trace) {
    os << 't';
    for (const auto& s : trace.species) os << ',' << s;
    for (const auto& s : trace.species) os << ",d" << s;
    os << '\n';
    for (const auto& st : trace.states) {
        os << format_double(st.t);
        for (double v : st.x) os << ',' << format_double(v);
        for (double v : st.xdot) os << ',' << format_double(v);
        os << '\n';
    }
}

void write_trace_csv(const std::string& path, const Trace& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace file " + path);
    write_trace_csv(out, trace);
}

Trace read_trace_csv(std::istream& is) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!trim(line).empty() && trim(line).front() != '#') break;
    }
    if (trim(line).empty()) throw std::runtime_error("trace CSV is empty");
    const auto header = split_csv(line);
    if (header.empty() || header[0] != "t" || header.size() % 2 != 1)
        throw std::runtime_error("trace CSV line " + std::to_string(line_no) +
                                 ": header must be t,<species...>,d<species...>");
    const std::size_t n = (header.size() - 1) / 2;
    Trace trace;
    for (std::size_t j = 0; j < n; ++j) {
        if (header[1 + n + j] != "d" + header[1 + j])
            throw std::runtime_error("trace CSV line " + std::to_string(line_no) + ": expected header column 'd" +
                                     header[1 + j] + "'");
        trace.species.push_back(header[1 + j]);
    }
    while (std::getline(is, line)) {
        ++line_no;
        if (trim(line).empty() || trim(line).front() == '#') continue;
        const auto cells = split_csv(line);
        if (cells.size() != header.size())
            throw std::runtime_error("trace CSV line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " columns");
        TimedState s;
        s.t = parse_cell(cells[0], line_no);
        for (std::size_t j = 0; j < n; ++j) s.x.push_back(parse_cell(cells[1 + j], line_no));
        for (std::size_t j = 0; j < n; ++j) s.xdot.push_back(parse_cell(cells[1 + n + j], line_no));
        if (!trace.states.empty() && !(s.t > trace.states.back().t))
            throw std::runtime_error("trace CSV line " + std::to_string(line_no) + ": time not strictly increasing");
        trace.states.push_back(std::move(s));
    }
    if (trace.states.empty()) throw std::runtime_error("trace CSV has no states");
    return trace;
}

Trace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file " + path);
    return read_trace_csv(in);
}

}  // namespace crnrobust
