#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>

#include "vasc/errors.hpp"
#include "vasc/io.hpp"

using namespace vasc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("vasc_io_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

Volume3D random_volume(Dims dims, std::uint64_t seed) {
    Volume3D v(dims, {20, 15, 20});
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> U(-1e4f, 1e4f);
    for (auto& x : v.values) x = U(rng);
    return v;
}

} // namespace

TEST_CASE("volume io: f32 round trip is bit identical") {
    TempDir tmp;
    auto vol = random_volume({7, 5, 9}, 3);
    const auto hdr = tmp.path / "vol.json";
    write_volume(vol, hdr, "f32");
    auto back = read_volume(hdr);
    CHECK(back.grid.dims == vol.grid.dims);
    CHECK(back.grid.spacing == vol.grid.spacing);
    REQUIRE(back.values.size() == vol.values.size());
    for (std::size_t p = 0; p < vol.values.size(); ++p) CHECK(back.values[p] == vol.values[p]);
}

TEST_CASE("volume io: u16 and u8 round trips for in-range integer values") {
    TempDir tmp;
    Volume3D vol({4, 4, 4}, {20, 20, 20});
    for (std::size_t p = 0; p < vol.values.size(); ++p) vol.values[p] = float(p * 100 % 6000);
    write_volume(vol, tmp.path / "v16.json", "u16");
    auto b16 = read_volume(tmp.path / "v16.json");
    for (std::size_t p = 0; p < vol.values.size(); ++p) CHECK(b16.values[p] == vol.values[p]);

    for (auto& x : vol.values) x = float(int(x) % 250);
    write_volume(vol, tmp.path / "v8.json", "u8");
    auto b8 = read_volume(tmp.path / "v8.json");
    for (std::size_t p = 0; p < vol.values.size(); ++p) CHECK(b8.values[p] == vol.values[p]);
}

TEST_CASE("mask io: round trip") {
    TempDir tmp;
    BinaryMask m(Grid{{6, 6, 6}, {20, 20, 20}});
    for (std::size_t p = 0; p < m.grid.size(); p += 3) m.membership[p] = 1;
    write_mask(m, tmp.path / "mask.json");
    auto back = read_mask(tmp.path / "mask.json");
    CHECK(back.grid.dims == m.grid.dims);
    CHECK(back.membership == m.membership);
}

TEST_CASE("volume io: truncated data file is rejected") {
    TempDir tmp;
    auto vol = random_volume({6, 6, 6}, 5);
    const auto hdr = tmp.path / "vol.json";
    write_volume(vol, hdr, "f32");
    const auto raw = tmp.path / "vol.raw";
    fs::resize_file(raw, fs::file_size(raw) - 4);
    CHECK_THROWS_AS(read_volume(hdr), CorruptData);
}

TEST_CASE("volume io: malformed headers are rejected") {
    TempDir tmp;
    auto write_header = [&](const std::string& text) {
        std::ofstream(tmp.path / "bad.json") << text;
        // A data file so only the header is at fault.
        std::ofstream(tmp.path / "bad.raw", std::ios::binary) << "xxxx";
    };

    write_header("not json at all");
    CHECK_THROWS_AS(read_volume(tmp.path / "bad.json"), UnsupportedFormat);

    write_header(R"({"dims":[0,4,4],"spacing_um":[20,20,20],"dtype":"u8","data":"bad.raw"})");
    CHECK_THROWS_AS(read_volume(tmp.path / "bad.json"), UnsupportedFormat);

    write_header(R"({"dims":[4,4,4],"spacing_um":[20,20,20],"dtype":"i64","data":"bad.raw"})");
    CHECK_THROWS_AS(read_volume(tmp.path / "bad.json"), UnsupportedFormat);

    write_header(R"({"spacing_um":[20,20,20],"dtype":"u8","data":"bad.raw"})");
    CHECK_THROWS_AS(read_volume(tmp.path / "bad.json"), UnsupportedFormat);
}

TEST_CASE("sha256_file: known digest and sensitivity to content") {
    TempDir tmp;
    const auto f = tmp.path / "abc.txt";
    std::ofstream(f, std::ios::binary) << "abc";
    CHECK(sha256_file(f) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    std::ofstream(f, std::ios::binary) << "abd";
    CHECK(sha256_file(f) !=
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
