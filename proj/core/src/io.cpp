#include "vasc/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include <openssl/evp.h>

#include <json.hpp>

#include "vasc/errors.hpp"

namespace vasc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Header {
    Dims dims;
    Spacing spacing;
    std::string dtype;
    fs::path data;
};

Header read_header(const fs::path& header_path) {
    std::ifstream in(header_path);
    if (!in) throw UnsupportedFormat("cannot open header: " + header_path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw UnsupportedFormat("invalid header JSON in " + header_path.string() + ": " + e.what());
    }
    Header h;
    try {
        const auto d = j.at("dims");
        const auto s = j.at("spacing_um");
        for (int a = 0; a < 3; ++a) {
            h.dims[std::size_t(a)] = d.at(std::size_t(a)).get<int>();
            h.spacing[std::size_t(a)] = s.at(std::size_t(a)).get<double>();
        }
        h.dtype = j.at("dtype").get<std::string>();
        h.data = header_path.parent_path() / j.at("data").get<std::string>();
    } catch (const json::exception& e) {
        throw UnsupportedFormat("header missing fields in " + header_path.string() + ": " + e.what());
    }
    if (h.dims[0] < 1 || h.dims[1] < 1 || h.dims[2] < 1)
        throw UnsupportedFormat("header dims must be >= 1 in " + header_path.string());
    if (h.spacing[0] <= 0 || h.spacing[1] <= 0 || h.spacing[2] <= 0)
        throw UnsupportedFormat("header spacing must be positive in " + header_path.string());
    if (h.dtype != "u8" && h.dtype != "u16" && h.dtype != "f32")
        throw UnsupportedFormat("unknown dtype '" + h.dtype + "' in " + header_path.string());
    return h;
}

std::size_t dtype_size(const std::string& dtype) {
    if (dtype == "u8") return 1;
    if (dtype == "u16") return 2;
    return 4;
}

std::vector<char> read_raw(const Header& h) {
    std::ifstream in(h.data, std::ios::binary);
    if (!in) throw CorruptData("cannot open data file: " + h.data.string());
    in.seekg(0, std::ios::end);
    const std::size_t actual = std::size_t(in.tellg());
    const std::size_t expect =
        std::size_t(h.dims[0]) * std::size_t(h.dims[1]) * std::size_t(h.dims[2]) *
        dtype_size(h.dtype);
    if (actual != expect)
        throw CorruptData("data length mismatch in " + h.data.string() + ": expected " +
                          std::to_string(expect) + " bytes, found " + std::to_string(actual));
    in.seekg(0);
    std::vector<char> buf(expect);
    in.read(buf.data(), std::streamsize(expect));
    if (!in) throw CorruptData("short read from " + h.data.string());
    return buf;
}

void write_header(const Header& h, const fs::path& header_path) {
    json j;
    j["dims"] = {h.dims[0], h.dims[1], h.dims[2]};
    j["spacing_um"] = {h.spacing[0], h.spacing[1], h.spacing[2]};
    j["dtype"] = h.dtype;
    j["data"] = h.data.filename().string();
    j["index_order"] = "x-fastest";
    std::ofstream out(header_path);
    if (!out) throw Error("cannot write header: " + header_path.string());
    out << j.dump(2) << "\n";
}

} // namespace

Volume3D read_volume(const fs::path& header_path) {
    const Header h = read_header(header_path);
    const std::vector<char> raw = read_raw(h);
    Volume3D vol(h.dims, h.spacing);
    const std::size_t n = vol.grid.size();
    if (h.dtype == "u8") {
        const auto* p = reinterpret_cast<const std::uint8_t*>(raw.data());
        for (std::size_t i = 0; i < n; ++i) vol.values[i] = float(p[i]);
    } else if (h.dtype == "u16") {
        for (std::size_t i = 0; i < n; ++i) {
            const auto lo = std::uint8_t(raw[2 * i]);
            const auto hi = std::uint8_t(raw[2 * i + 1]);
            vol.values[i] = float(std::uint16_t(lo) | (std::uint16_t(hi) << 8));
        }
    } else {
        static_assert(sizeof(float) == 4);
        std::memcpy(vol.values.data(), raw.data(), n * 4);  // little-endian host
    }
    return vol;
}

void write_volume(const Volume3D& vol, const fs::path& header_path, const std::string& dtype) {
    if (dtype != "u8" && dtype != "u16" && dtype != "f32")
        throw UnsupportedFormat("write_volume: unknown dtype '" + dtype + "'");
    Header h{vol.grid.dims, vol.grid.spacing, dtype, fs::path(header_path).replace_extension(".raw")};
    std::ofstream out(h.data, std::ios::binary);
    if (!out) throw Error("cannot write data file: " + h.data.string());
    const std::size_t n = vol.grid.size();
    if (dtype == "u8") {
        std::vector<std::uint8_t> buf(n);
        for (std::size_t i = 0; i < n; ++i) buf[i] = std::uint8_t(vol.values[i]);
        out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(n));
    } else if (dtype == "u16") {
        std::vector<char> buf(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto v = std::uint16_t(vol.values[i]);
            buf[2 * i] = char(v & 0xff);
            buf[2 * i + 1] = char(v >> 8);
        }
        out.write(buf.data(), std::streamsize(buf.size()));
    } else {
        out.write(reinterpret_cast<const char*>(vol.values.data()), std::streamsize(n * 4));
    }
    if (!out) throw Error("short write to " + h.data.string());
    out.close();
    write_header(h, header_path);
}

BinaryMask read_mask(const fs::path& header_path) {
    const Volume3D vol = read_volume(header_path);
    BinaryMask mask(vol.grid);
    for (std::size_t i = 0; i < vol.values.size(); ++i)
        mask.membership[i] = vol.values[i] != 0.0f ? 1 : 0;
    return mask;
}

void write_mask(const BinaryMask& mask, const fs::path& header_path) {
    Volume3D vol(mask.grid.dims, mask.grid.spacing);
    for (std::size_t i = 0; i < mask.membership.size(); ++i)
        vol.values[i] = float(mask.membership[i]);
    write_volume(vol, header_path, "u8");
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for hashing: " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), std::streamsize(buf.size()));
        EVP_DigestUpdate(ctx, buf.data(), std::size_t(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

} // namespace vasc
