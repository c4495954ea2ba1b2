#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "mlabel/common.hpp"

namespace mlabel {

// Little-endian binary artifact files. Every artifact starts with an 8-byte
// magic tag and a u32 format version; loading a mismatched version fails.

class BinWriter {
public:
    explicit BinWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw error("cannot write file: " + path);
    }

    void magic(const char tag[8], std::uint32_t version) {
        out_.write(tag, 8);
        u32(version);
    }
    void u8(std::uint8_t v) { raw(&v, 1); }
    void u32(std::uint32_t v) { raw(&v, 4); }
    void u64(std::uint64_t v) { raw(&v, 8); }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        u64(bits);
    }
    void f32(float v) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        u32(bits);
    }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        raw(s.data(), s.size());
    }
    void str_vec(const std::vector<std::string>& v) {
        u32(static_cast<std::uint32_t>(v.size()));
        for (const auto& s : v) str(s);
    }
    void f64_vec(const std::vector<double>& v) {
        u32(static_cast<std::uint32_t>(v.size()));
        for (double d : v) f64(d);
    }
    void close() {
        out_.close();
        if (!out_) throw error("write failed: " + path_);
    }

private:
    void raw(const void* p, std::size_t n) {
        out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    }
    std::string path_;
    std::ofstream out_;
};

class BinReader {
public:
    explicit BinReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
        if (!in_) throw error("cannot open file: " + path);
    }

    void expect_magic(const char tag[8], std::uint32_t version) {
        char got[8];
        raw(got, 8);
        if (std::memcmp(got, tag, 8) != 0)
            throw error("not a " + std::string(tag, tag + 7) + " file: " + path_);
        const std::uint32_t got_version = u32();
        if (got_version != version)
            throw error("unsupported format version " + std::to_string(got_version) + " in " +
                        path_ + " (expected " + std::to_string(version) + ")");
    }
    std::uint8_t u8() {
        std::uint8_t v;
        raw(&v, 1);
        return v;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, 4);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        raw(&v, 8);
        return v;
    }
    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    float f32() {
        const std::uint32_t bits = u32();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    std::string str() {
        const std::uint32_t n = u32();
        std::string s(n, '\0');
        raw(s.data(), n);
        return s;
    }
    std::vector<std::string> str_vec() {
        const std::uint32_t n = u32();
        std::vector<std::string> v;
        v.reserve(n);
        for (std::uint32_t i = 0; i < n; ++i) v.push_back(str());
        return v;
    }
    std::vector<double> f64_vec() {
        const std::uint32_t n = u32();
        std::vector<double> v(n);
        for (std::uint32_t i = 0; i < n; ++i) v[i] = f64();
        return v;
    }

private:
    void raw(void* p, std::size_t n) {
        in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n)
            throw error("truncated or corrupt file: " + path_);
    }
    std::string path_;
    std::ifstream in_;
};

}  // namespace mlabel
