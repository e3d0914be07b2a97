#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "catch_amalgamated.hpp"

#include "fcx/cli.hpp"

using namespace fcx;

namespace {

  struct Result {
    int         status;
    std::string out;
    std::string err;
  };

  Result fcx_run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int                status = cli::run(std::move(args), out, err);
    return {status, out.str(), err.str()};
  }

  std::filesystem::path scratch_dir() {
    auto p = std::filesystem::temp_directory_path()
             / ("fcx-test-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(p);
    return p;
  }

}  // namespace

TEST_CASE("decision commands", "[cli]") {
  auto r = fcx_run({"basis-check", "--rank", "3", "x", "yxY"});
  CHECK(r.status == 0);
  CHECK(r.out == "false\n");
  CHECK(fcx_run({"primitive", "--rank", "3", "yxY"}).out == "true\n");
  CHECK(fcx_run({"primitive", "xxy"}).out == "true\n");
  CHECK(fcx_run({"primitive", "xx", "--rank", "2"}).out == "false\n");
  CHECK(fcx_run({"free-factor", "x", "yxY", "--rank", "3"}).out == "false\n");
  CHECK(fcx_run({"free-factor", "xy", "z"}).out == "true\n");

  auto t = fcx_run({"basis-check", "--rank", "3", "x", "yxY", "--trace"});
  CHECK(t.out.find("reason: ") != std::string::npos);

  auto z = fcx_run({"z-simplex", "--rank", "3", "y,z", "x,z"});
  CHECK(z.status == 0);
  CHECK(z.out == "true\n");
}

TEST_CASE("invariance sampling is seeded", "[cli]") {
  auto a = fcx_run({"primitive", "xyxY", "--rank", "2", "--check-invariance", "20", "--json",
                    "--seed", "5"});
  auto b = fcx_run({"primitive", "xyxY", "--rank", "2", "--check-invariance", "20", "--json",
                    "--seed", "5"});
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  auto j = json::parse(a.out);
  CHECK(j["invariance"]["agree"] == 20);
  CHECK(fcx_run({"basis-check", "x", "yxY", "--rank", "3", "--check-invariance", "10"}).status == 0);
}

TEST_CASE("complex commands", "[cli]") {
  auto a = fcx_run({"apartment", "x", "y", "z", "--homology"});
  CHECK(a.status == 0);
  CHECK(a.out.find("H~_1 = Z^1") != std::string::npos);
  CHECK(a.out.find("f-vector: 6 6") != std::string::npos);

  auto b = fcx_run({"building", "3", "2", "--steinberg"});
  CHECK(b.status == 0);
  CHECK(b.out.find("computed 8, expected 8 = 2^3") != std::string::npos);
  CHECK(b.out.find("pass") != std::string::npos);

  auto s = fcx_run({"steinberg", "2", "3", "--json"});
  CHECK(s.status == 0);
  CHECK(json::parse(s.out)["steinberg"]["computed"] == 3);

  auto m = fcx_run({"map-to-building", "xy", "y", "z"});
  CHECK(m.status == 0);
  CHECK(m.out.find("verified: true") != std::string::npos);
  CHECK(m.out.find("<xy> -> [1,1,0]") != std::string::npos);

  auto tr = fcx_run({"truncate-fc", "3", "--max-edges", "3", "--depth", "2", "--no-cache",
                     "--homology", "--saturation"});
  CHECK(tr.status == 0);
  CHECK(tr.out.find("H~_0 = 0") != std::string::npos);
}

TEST_CASE("complex files round trip", "[cli]") {
  auto dir  = scratch_dir();
  auto file = (dir / "apartment.json").string();
  REQUIRE(fcx_run({"apartment", "x", "y", "z", "a", "--emit", file}).status == 0);
  auto h = fcx_run({"homology", file});
  CHECK(h.status == 0);
  CHECK(h.out == "H~_0 = 0\nH~_1 = 0\nH~_2 = Z^1\n");
  auto l = fcx_run({"link", file, "<x>", "--homology"});
  CHECK(l.status == 0);
  CHECK(l.out.find("H~_1 = Z^1") != std::string::npos);
  CHECK(fcx_run({"link", file, "<nope>"}).status == 2);
  CHECK(fcx_run({"homology", (dir / "missing.json").string()}).status == 64);
  {
    std::ofstream bad(dir / "bad.json");
    bad << "{\"vertices\": [\"a\"], \"facets\": [[0, 3]]}";
  }
  CHECK(fcx_run({"homology", (dir / "bad.json").string()}).status == 64);
  std::filesystem::remove_all(dir);
}

TEST_CASE("exit statuses", "[cli]") {
  CHECK(fcx_run({}).status == 64);
  CHECK(fcx_run({"no-such-command"}).status == 64);
  CHECK(fcx_run({"primitive", "x!"}).status == 64);
  CHECK(fcx_run({"primitive", "q", "--rank", "2"}).status == 64);
  CHECK(fcx_run({"primitive", "1", "--rank", "2"}).status == 2);
  CHECK(fcx_run({"apartment", "x", "yxY", "z"}).status == 2);
  CHECK(fcx_run({"building", "3", "4"}).status == 64);
  CHECK(fcx_run({"help"}).status == 64);
  CHECK(fcx_run({"--help"}).status == 0);

  auto cap = fcx_run({"truncate-fc", "4", "--max-edges", "5", "--max-factors", "100",
                      "--no-cache", "--json"});
  CHECK(cap.status == 3);
  CHECK(cap.err.find("progress: ") != std::string::npos);
  CHECK(json::parse(cap.out)["error"] == "resource_limit");

  auto big = fcx_run({"building", "5", "2"});
  CHECK(big.status == 3);
  auto cells = fcx_run({"building", "4", "2", "--homology", "--max-cells", "100"});
  CHECK(cells.status == 3);
}

TEST_CASE("output is deterministic and modes agree", "[cli]") {
  std::vector<std::string> args{"truncate-fc", "3", "--max-edges", "3", "--depth", "2",
                                "--no-cache", "--homology", "--json"};
  auto a = fcx_run(args);
  auto b = fcx_run(args);
  auto args3 = args;
  args3.insert(args3.end(), {"--threads", "3"});
  auto c = fcx_run(args3);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);

  auto text = fcx_run({"truncate-fc", "3", "--max-edges", "3", "--depth", "2", "--no-cache",
                       "--homology"});
  auto j    = json::parse(a.out);
  CHECK(text.out.find("factors: " + std::to_string(j["num_factors"].get<int>()))
        != std::string::npos);
  std::string fv = "f-vector:";
  for (auto const& x : j["f_vector"]) {
    fv += " " + std::to_string(x.get<long long>());
  }
  CHECK(text.out.find(fv + "\n") != std::string::npos);
  for (auto const& g : j["homology"]["groups"]) {
    int d = g["degree"];
    if (d < 0) {
      continue;
    }
    std::size_t betti = g["betti"];
    std::string line  = "H~_" + std::to_string(d) + " = "
                       + (betti ? "Z^" + std::to_string(betti) : std::string("0"));
    CHECK(text.out.find(line) != std::string::npos);
  }
}

TEST_CASE("cache round trip", "[cli][cache]") {
  auto  dir = scratch_dir();
  Cache cache(dir);
  TruncationSpec spec{3, 4, 3};
  auto           e       = enumerate_factors(spec);
  auto           payload = cli::detail::enumeration_json(e);
  cache.store(spec.canonical(), payload);
  auto back = cache.lookup(spec.canonical());
  REQUIRE(back);
  CHECK(back->dump() == payload.dump());
  auto rebuilt = cli::detail::enumeration_from_json(spec, *back);
  CHECK(cli::detail::enumeration_json(rebuilt).dump() == payload.dump());

  // Version bump misses.
  Cache newer(dir, "999.0.0");
  CHECK_FALSE(newer.lookup(spec.canonical()));
  // Stable, spec-dependent hashes.
  CHECK(hash_hex(spec.canonical()) == hash_hex(TruncationSpec{3, 4, 3}.canonical()));
  CHECK(hash_hex(spec.canonical()) != hash_hex(TruncationSpec{3, 4, 2}.canonical()));
  CHECK(hash_hex("") == "cbf29ce484222325");
  CHECK(cache.path_for(spec.canonical()).filename() == hash_hex(spec.canonical()) + ".json");
  std::filesystem::remove_all(dir);
}

TEST_CASE("corrupt cache entries are discarded", "[cli][cache]") {
  auto               dir = scratch_dir();
  std::ostringstream warnings;
  Cache              cache(dir, FCX_VERSION, &warnings);
  std::string const  spec = TruncationSpec{3, 3, 1}.canonical();
  {
    std::ofstream f(cache.path_for(spec));
    f << "{not json";
  }
  CHECK_FALSE(cache.lookup(spec));
  CHECK(warnings.str().find("warning") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(cache.path_for(spec)));

  // A tampered payload fails revalidation through the CLI and is recomputed.
  auto first = fcx_run({"truncate-fc", "3", "--max-edges", "3", "--depth", "1", "--cache-dir",
                        dir.string(), "--json"});
  REQUIRE(first.status == 0);
  auto path  = cache.path_for(TruncationSpec{3, 3, 1}.canonical());
  auto entry = json::parse(std::ifstream(path));
  entry["payload"]["factors"][0]["witness"]["x"] = "xx";
  std::ofstream(path) << entry.dump();
  auto second = fcx_run({"truncate-fc", "3", "--max-edges", "3", "--depth", "1", "--cache-dir",
                         dir.string(), "--json"});
  CHECK(second.status == 0);
  CHECK(second.out == first.out);
  CHECK(second.err.find("failed revalidation") != std::string::npos);
  auto third = fcx_run({"truncate-fc", "3", "--max-edges", "3", "--depth", "1", "--cache-dir",
                        dir.string(), "--json"});
  CHECK(third.err.find("cache hit") != std::string::npos);
  CHECK(third.out == first.out);
  std::filesystem::remove_all(dir);
}
