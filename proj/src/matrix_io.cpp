#include "randutv/matrix_io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace randutv {

namespace {

constexpr char kMagic[4] = {'R', 'U', 'T', 'V'};

void put_u64_le(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64_le(std::istream& is, const std::string& path) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8))
        throw IoError("truncated header in " + path);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

bool has_suffix(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

}  // namespace

void write_rutv(const std::string& path, ConstMatrixView a) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os.write(kMagic, 4);
    put_u64_le(os, static_cast<std::uint64_t>(a.rows));
    put_u64_le(os, static_cast<std::uint64_t>(a.cols));
    for (idx j = 0; j < a.cols; ++j)
        for (idx i = 0; i < a.rows; ++i)
            put_u64_le(os, std::bit_cast<std::uint64_t>(a(i, j)));
    if (!os) throw IoError("write failed for " + path);
}

Matrix read_rutv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("bad magic in " + path);
    const std::uint64_t rows = get_u64_le(is, path);
    const std::uint64_t cols = get_u64_le(is, path);
    if (rows > (1u << 30) || cols > (1u << 30))
        throw IoError("implausible dimensions in " + path);
    Matrix m(static_cast<idx>(rows), static_cast<idx>(cols));
    for (idx j = 0; j < m.cols(); ++j)
        for (idx i = 0; i < m.rows(); ++i)
            m(i, j) = std::bit_cast<double>(get_u64_le(is, path));
    // Tolerate nothing after the payload.
    char extra;
    if (is.read(&extra, 1)) throw IoError("trailing bytes in " + path);
    return m;
}

void write_csv(const std::string& path, ConstMatrixView a) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    char buf[40];
    for (idx i = 0; i < a.rows; ++i) {
        for (idx j = 0; j < a.cols; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
            os << (j ? "," : "") << buf;
        }
        os << "\n";
    }
    if (!os) throw IoError("write failed for " + path);
}

Matrix read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t ncols = 0;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && is.peek() == EOF) break;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            std::string field = line.substr(start, comma == std::string::npos
                                                       ? std::string::npos
                                                       : comma - start);
            const char* s = field.c_str();
            char* end = nullptr;
            double v = std::strtod(s, &end);
            while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
            if (end == s || (end && *end))
                throw IoError("bad numeric field '" + field + "' in " + path);
            if (!std::isfinite(v))
                throw IoError("non-finite value in " + path);
            row.push_back(v);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (rows.empty())
            ncols = row.size();
        else if (row.size() != ncols)
            throw IoError("ragged row (" + std::to_string(row.size()) + " fields, expected " +
                          std::to_string(ncols) + ") in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("empty CSV " + path);
    Matrix m(static_cast<idx>(rows.size()), static_cast<idx>(ncols));
    for (idx i = 0; i < m.rows(); ++i)
        for (idx j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

void write_matrix(const std::string& path, ConstMatrixView a) {
    if (has_suffix(path, ".rutv"))
        write_rutv(path, a);
    else if (has_suffix(path, ".csv"))
        write_csv(path, a);
    else
        throw IoError("unknown matrix extension for " + path + " (use .rutv or .csv)");
}

Matrix read_matrix(const std::string& path) {
    if (has_suffix(path, ".rutv")) return read_rutv(path);
    if (has_suffix(path, ".csv")) return read_csv(path);
    throw IoError("unknown matrix extension for " + path + " (use .rutv or .csv)");
}

}  // namespace randutv
