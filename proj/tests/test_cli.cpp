// Drives the built binary the way an operator would, checking outputs and
// the exit-code contract: 0 ok, 1 decode, 2 usage, 3 io, 4 transport.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>

#include "penc/pipeline.hpp"
#include "penc/wire.hpp"

#include "testutil.hpp"

#ifndef PENC_CLI_PATH
#error "PENC_CLI_PATH must point at the built CLI"
#endif

namespace {

namespace fs = std::filesystem;

struct CliResult {
    int exit_code;
    std::string output; // stdout + stderr interleaved
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(PENC_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = ::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        output.append(buf.data(), n);
    int rc = ::pclose(pipe);
    return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, output};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("penc_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

std::vector<std::uint8_t> slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    REQUIRE(out.good());
}

const std::string reference_key = "0000000000000000000000000000001d";

} // namespace

TEST_CASE("cli: table text output carries the reference cells") {
    auto r = run_cli("table --a-max 9 --b-max 10");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("m=5 n=3 I=3 J=6") != std::string::npos);
    CHECK(r.output.find("m=8 n=7 I=5 J=11160") != std::string::npos);
}

TEST_CASE("cli: table csv output") {
    auto r = run_cli("table --a-max 1 --b-max 2 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "a,b,m,n,I,J\n1,2,3,2,1,0\n");
}

TEST_CASE("cli: table usage errors exit 2") {
    CHECK(run_cli("table --a-max 0").exit_code == 2);
    CHECK(run_cli("table --format yaml").exit_code == 2);
    CHECK(run_cli("bogus-subcommand").exit_code == 2);
}

TEST_CASE("cli: shape output") {
    auto ring = run_cli("shape --a 3 --b 4");
    CHECK(ring.exit_code == 0);
    CHECK(ring.output == "m=5 n=3 I=3 J=6\n");

    auto no_ring = run_cli("shape --a 2 --b 4");
    CHECK(no_ring.exit_code == 0);
    CHECK(no_ring.output == "m=3 n=- (no ring)\n");

    CHECK(run_cli("shape --a 4 --b 4").exit_code == 2);
    CHECK(run_cli("shape --a 3").exit_code == 2);
}

TEST_CASE("cli: encrypt/decrypt round trip through files") {
    TempDir dir;
    auto g = testutil::rng(0xc11);
    auto plain = testutil::random_bytes(g, 32);
    spit(dir.file("plain"), plain);

    auto enc = run_cli("encrypt --key " + reference_key + " -i " +
                       dir.file("plain") + " -o " + dir.file("session"));
    REQUIRE(enc.exit_code == 0);
    auto dec = run_cli("decrypt --key " + reference_key + " -i " +
                       dir.file("session") + " -o " + dir.file("out"));
    REQUIRE(dec.exit_code == 0);
    CHECK(slurp(dir.file("out")) == plain);
}

TEST_CASE("cli: encryption is deterministic for fixed key and input") {
    TempDir dir;
    spit(dir.file("plain"), {10, 20, 30});
    REQUIRE(run_cli("encrypt --key " + reference_key + " -i " + dir.file("plain") +
                    " -o " + dir.file("s1")).exit_code == 0);
    REQUIRE(run_cli("encrypt --key " + reference_key + " -i " + dir.file("plain") +
                    " -o " + dir.file("s2")).exit_code == 0);
    CHECK(slurp(dir.file("s1")) == slurp(dir.file("s2")));
}

TEST_CASE("cli: the reference byte produces the worked-example amplitudes") {
    TempDir dir;
    spit(dir.file("plain"), {0x03});
    REQUIRE(run_cli("encrypt --key " + reference_key + " --period 8 -i " +
                    dir.file("plain") + " -o " + dir.file("session"))
                .exit_code == 0);
    auto session = penc::read_session(slurp(dir.file("session")));
    REQUIRE(session.symbols.size() == 1);
    std::array<penc::Int, 3> amps;
    for (std::size_t j = 0; j < 3; ++j) {
        auto tpl = penc::make_template(session.symbols[0][j].waveform_id, 8);
        amps[j] = penc::recover_amplitude(session.symbols[0][j], tpl);
    }
    CHECK(amps == std::array<penc::Int, 3>{55, 171, 351});
}

TEST_CASE("cli: standard streams work with -") {
    TempDir dir;
    spit(dir.file("plain"), {'p', 'i', 'p', 'e'});
    std::string cmd = std::string(PENC_CLI_PATH) + " encrypt --key " +
                      reference_key + " -i - -o - < " + dir.file("plain") +
                      " | " + PENC_CLI_PATH + " decrypt --key " + reference_key +
                      " -i - -o " + dir.file("out");
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(slurp(dir.file("out")) == std::vector<std::uint8_t>{'p', 'i', 'p', 'e'});
}

TEST_CASE("cli: key from the environment, flag wins") {
    TempDir dir;
    spit(dir.file("plain"), {1, 2, 3});

    std::string env_cmd = "PENC_KEY=" + reference_key + " " + PENC_CLI_PATH +
                          " encrypt -i " + dir.file("plain") + " -o " +
                          dir.file("s_env");
    REQUIRE(std::system(env_cmd.c_str()) == 0);

    // flag overrides a bogus environment value
    std::string flag_cmd = std::string("PENC_KEY=ffffffffffffffffffffffffffffffff ") +
                           PENC_CLI_PATH + " encrypt --key " + reference_key +
                           " -i " + dir.file("plain") + " -o " + dir.file("s_flag");
    REQUIRE(std::system(flag_cmd.c_str()) == 0);
    CHECK(slurp(dir.file("s_env")) == slurp(dir.file("s_flag")));
}

TEST_CASE("cli: key validation and absence") {
    TempDir dir;
    spit(dir.file("plain"), {1});
    CHECK(run_cli("encrypt --key zz -i " + dir.file("plain") + " -o -").exit_code == 2);
    // no key anywhere
    std::string cmd = std::string("env -u PENC_KEY ") + PENC_CLI_PATH +
                      " encrypt -i " + dir.file("plain") + " -o /dev/null 2>/dev/null";
    int rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == 2);
}

TEST_CASE("cli: decrypt failures use exit 1 and name the symbol") {
    TempDir dir;
    spit(dir.file("plain"), {42, 43});
    REQUIRE(run_cli("encrypt --key " + reference_key + " -i " + dir.file("plain") +
                    " -o " + dir.file("session")).exit_code == 0);

    auto session = slurp(dir.file("session"));
    session[13 + 5 + 16 * 8] ^= 0x40; // corrupt a sample of symbol 0
    spit(dir.file("tampered"), session);
    auto r = run_cli("decrypt --key " + reference_key + " -i " +
                     dir.file("tampered") + " -o " + dir.file("out"));
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("symbol 0") != std::string::npos);

    // wrong key: error or wrong output, never a crash
    auto wrong = run_cli("decrypt --key 00112233445566778899aabbccddeeff -i " +
                         dir.file("session") + " -o " + dir.file("out2"));
    if (wrong.exit_code == 0)
        CHECK(slurp(dir.file("out2")) != std::vector<std::uint8_t>{42, 43});
    else
        CHECK(wrong.exit_code == 1);

    // not a session at all
    spit(dir.file("junk"), {'X', 'E', 'N', 'C', 1, 0, 0, 0});
    CHECK(run_cli("decrypt --key " + reference_key + " -i " + dir.file("junk") +
                  " -o -").exit_code == 1);
}

TEST_CASE("cli: io errors exit 3") {
    CHECK(run_cli("encrypt --key " + reference_key +
                  " -i /nonexistent/input -o -").exit_code == 3);
    TempDir dir;
    spit(dir.file("plain"), {1});
    CHECK(run_cli("encrypt --key " + reference_key + " -i " + dir.file("plain") +
                  " -o /nonexistent/dir/out").exit_code == 3);
}

TEST_CASE("cli: transport round trip and transport errors exit 4") {
    TempDir dir;
    auto g = testutil::rng(0xc12);
    auto plain = testutil::random_bytes(g, 16);
    spit(dir.file("plain"), plain);
    REQUIRE(run_cli("encrypt --key " + reference_key + " -i " + dir.file("plain") +
                    " -o " + dir.file("session")).exit_code == 0);

    const std::uint16_t port =
        static_cast<std::uint16_t>(34000 + ::getpid() % 20000);
    int recv_rc = -1;
    std::thread receiver([&] {
        recv_rc = run_cli("recv --listen 127.0.0.1:" + std::to_string(port) +
                          " --timeout 15 -o " + dir.file("received") + " --key " +
                          reference_key + " --plaintext-out " + dir.file("plain2"))
                      .exit_code;
    });
    int send_rc = run_cli("send --to 127.0.0.1:" + std::to_string(port) +
                          " --timeout 15 -i " + dir.file("session"))
                      .exit_code;
    receiver.join();
    REQUIRE(send_rc == 0);
    REQUIRE(recv_rc == 0);
    CHECK(slurp(dir.file("received")) == slurp(dir.file("session")));
    CHECK(slurp(dir.file("plain2")) == plain); // recv-side decryption

    // no sender within the timeout
    CHECK(run_cli("recv --listen 127.0.0.1:" + std::to_string(port + 1) +
                  " --timeout 1 -o -").exit_code == 4);
    // nobody listening
    CHECK(run_cli("send --to 127.0.0.1:" + std::to_string(port + 2) +
                  " --timeout 1 -i " + dir.file("session")).exit_code == 4);
}
