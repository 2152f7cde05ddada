#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "parawave/grid.hpp"

namespace parawave::io {

using spectral::GridFunction;
using spectral::PeriodicGrid;

// Flat binary container for grid functions.
// Header: magic "PWGF", u32 version, u32 dim, u32 n per axis, u32 flags
// (bit 0: complex payload).  Payload: row-major doubles.
inline void write_pwgf(const std::string& path, const GridFunction& f, bool as_real = false) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    const char magic[4] = {'P', 'W', 'G', 'F'};
    std::uint32_t version = 1, dim = f.grid().dim, n = f.grid().n;
    std::uint32_t flags = as_real ? 0u : 1u;
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&dim), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&flags), 4);
    for (const auto& v : f.values()) {
        double re = v.real();
        out.write(reinterpret_cast<const char*>(&re), 8);
        if (!as_real) {
            double im = v.imag();
            out.write(reinterpret_cast<const char*>(&im), 8);
        }
    }
}

inline GridFunction read_pwgf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[4];
    std::uint32_t version, dim, n, flags;
    in.read(magic, 4);
    if (std::string(magic, 4) != "PWGF") throw std::runtime_error("bad magic in " + path);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&dim), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&flags), 4);
    PeriodicGrid g{int(dim), int(n)};
    std::vector<spectral::cplx> vals(g.size());
    for (auto& v : vals) {
        double re = 0, im = 0;
        in.read(reinterpret_cast<char*>(&re), 8);
        if (flags & 1u) in.read(reinterpret_cast<char*>(&im), 8);
        v = {re, im};
    }
    if (!in) throw std::runtime_error("truncated payload in " + path);
    return GridFunction::from_values(g, std::move(vals));
}

// Deterministic textual formatting: %.17g round-trips doubles exactly and is
// independent of stream state, so identical runs give identical bytes.
inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path);
        for (std::size_t i = 0; i < header.size(); ++i)
            out_ << (i ? "," : "") << header[i];
        out_ << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

// CSV dump for small one-dimensional fields.
inline void write_csv_1d(const std::string& path, const GridFunction& f) {
    if (f.grid().dim != 1) throw std::invalid_argument("csv dump is for d=1 fields");
    CsvWriter csv(path, {"x", "re", "im"});
    for (std::size_t i = 0; i < f.values().size(); ++i)
        csv.row({fmt(f.grid().point(i)[0]), fmt(f.values()[i].real()), fmt(f.values()[i].imag())});
}

}  // namespace parawave::io
