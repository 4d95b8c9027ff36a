// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace patprof {

/// 17 significant digits: round-trips any double, locale-independent.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open output file: " + path);
    }

    void raw_line(const std::string& line) { out_ << line << '\n'; }

    template <typename... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        ((out_ << (first ? "" : ","), first = false, put(fields)), ...);
        out_ << '\n';
    }

    void flush() { out_.flush(); }

private:
    void put(const std::string& s) { out_ << s; }
    void put(const char* s) { out_ << s; }
    void put(double x) { out_ << fmt17(x); }
    void put(int x) { out_ << x; }
    void put(long x) { out_ << x; }
    void put(long long x) { out_ << x; }
    void put(unsigned long long x) { out_ << x; }

    std::ofstream out_;
};

}  // namespace patprof
