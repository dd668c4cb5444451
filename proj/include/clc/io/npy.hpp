#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "clc/core/errors.hpp"
#include "clc/core/tensor.hpp"

namespace clc::npy {

// Minimal NPY v1.0 reader/writer. Arrays are C-order; supported dtypes are
// <f8, <f4 and |u1 (everything is promoted to double on read).

struct Array {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    std::size_t element_count() const {
        return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                               std::multiplies<>());
    }
};

inline void write(const std::filesystem::path& path, const double* data,
                  const std::vector<std::size_t>& shape) {
    std::string shape_str = "(";
    for (std::size_t i = 0; i < shape.size(); ++i)
        shape_str += std::to_string(shape[i]) + (shape.size() == 1 || i + 1 < shape.size() ? "," : "");
    shape_str += ")";
    std::string header = "{'descr': '<f8', 'fortran_order': False, 'shape': " + shape_str + ", }";
    // Pad so that data starts at a multiple of 64 bytes.
    const std::size_t preamble = 10;
    std::size_t total = preamble + header.size() + 1;
    const std::size_t pad = (64 - total % 64) % 64;
    header.append(pad, ' ');
    header.push_back('\n');

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    const unsigned char magic[8] = {0x93, 'N', 'U', 'M', 'P', 'Y', 1, 0};
    out.write(reinterpret_cast<const char*>(magic), 8);
    const std::uint16_t hlen = static_cast<std::uint16_t>(header.size());
    out.write(reinterpret_cast<const char*>(&hlen), 2);
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    std::size_t n = 1;
    for (auto s : shape) n *= s;
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
    if (!out) throw IoError("short write to " + path.string());
}

inline void write(const std::filesystem::path& path, const std::vector<double>& data,
                  const std::vector<std::size_t>& shape) {
    write(path, data.data(), shape);
}

inline void write(const std::filesystem::path& path, const Tensor& t) {
    write(path, t.data(),
          {static_cast<std::size_t>(t.channels()), static_cast<std::size_t>(t.height()),
           static_cast<std::size_t>(t.width())});
}

namespace detail {
inline std::string find_field(const std::string& header, const std::string& key) {
    const auto pos = header.find("'" + key + "'");
    if (pos == std::string::npos) throw IoError("npy header missing field " + key);
    auto colon = header.find(':', pos);
    auto rest = header.substr(colon + 1);
    // Trim to the next top-level comma or closing brace.
    std::size_t depth = 0, end = 0;
    for (; end < rest.size(); ++end) {
        char c = rest[end];
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') {
            if (depth == 0) break;
            --depth;
        }
        if ((c == ',' || c == '}') && depth == 0) break;
    }
    if (rest[end] == ')') ++end;  // keep tuple close
    std::string value = rest.substr(0, end);
    const auto first = value.find_first_not_of(" '");
    const auto last = value.find_last_not_of(" '");
    return value.substr(first, last - first + 1);
}
}  // namespace detail

inline Array read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    unsigned char magic[8];
    in.read(reinterpret_cast<char*>(magic), 8);
    if (!in || std::memcmp(magic, "\x93NUMPY", 6) != 0)
        throw IoError(path.string() + " is not an npy file");
    std::uint16_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), 2);
    std::string header(hlen, '\0');
    in.read(header.data(), hlen);

    const std::string descr = detail::find_field(header, "descr");
    const std::string order = detail::find_field(header, "fortran_order");
    if (order != "False") throw IoError("fortran-order npy not supported");
    std::string shape_str = detail::find_field(header, "shape");

    Array arr;
    std::size_t i = 0;
    while (i < shape_str.size()) {
        if (std::isdigit(static_cast<unsigned char>(shape_str[i]))) {
            std::size_t j = i;
            while (j < shape_str.size() && std::isdigit(static_cast<unsigned char>(shape_str[j]))) ++j;
            arr.shape.push_back(std::stoull(shape_str.substr(i, j - i)));
            i = j;
        } else {
            ++i;
        }
    }

    const std::size_t n = arr.element_count();
    arr.data.resize(n);
    if (descr == "<f8") {
        in.read(reinterpret_cast<char*>(arr.data.data()),
                static_cast<std::streamsize>(n * sizeof(double)));
    } else if (descr == "<f4") {
        std::vector<float> tmp(n);
        in.read(reinterpret_cast<char*>(tmp.data()), static_cast<std::streamsize>(n * sizeof(float)));
        for (std::size_t k = 0; k < n; ++k) arr.data[k] = tmp[k];
    } else if (descr == "|u1") {
        std::vector<std::uint8_t> tmp(n);
        in.read(reinterpret_cast<char*>(tmp.data()), static_cast<std::streamsize>(n));
        for (std::size_t k = 0; k < n; ++k) arr.data[k] = tmp[k];
    } else {
        throw IoError("unsupported npy dtype " + descr);
    }
    if (!in) throw IoError("short read from " + path.string());
    return arr;
}

}  // namespace clc::npy
