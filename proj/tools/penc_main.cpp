// Command-line front end: arity-shape tables, encrypt/decrypt between files
// or standard streams, and one-session TCP transfer.
//
// Exit codes: 0 success, 1 decode/protocol failure, 2 usage, 3 I/O,
// 4 transport.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "penc/penc.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_decode = 1;
constexpr int exit_usage = 2;
constexpr int exit_io = 3;
constexpr int exit_transport = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        auto s = buf.str();
        return {s.begin(), s.end()};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw IoError("error reading " + path);
    auto s = buf.str();
    return {s.begin(), s.end()};
}

void write_output(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    if (path == "-") {
        std::cout.write(reinterpret_cast<const char*>(bytes.data()),
                        static_cast<std::streamsize>(bytes.size()));
        std::cout.flush();
        if (!std::cout)
            throw IoError("error writing to standard output");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out)
        throw IoError("error writing " + path);
}

void write_text(const std::string& path, const std::string& text) {
    write_output(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

penc::SessionKey key_from_options(const std::string& flag_value) {
    std::string hex = flag_value;
    if (hex.empty()) {
        if (const char* env = std::getenv("PENC_KEY"))
            hex = env;
    }
    if (hex.empty())
        throw UsageError("no key: pass --key or set PENC_KEY");
    try {
        return penc::SessionKey::from_hex(hex);
    } catch (const penc::ParameterError& e) {
        throw UsageError(e.what());
    }
}

penc::PowerTriple parse_powers(const std::string& text) {
    std::array<std::int64_t, 3> vals{};
    std::istringstream in(text);
    for (std::size_t i = 0; i < 3; ++i) {
        std::string part;
        if (!std::getline(in, part, ','))
            throw UsageError("--powers needs three comma-separated integers");
        try {
            vals[i] = std::stoll(part);
        } catch (const std::exception&) {
            throw UsageError("--powers contains a non-integer: " + part);
        }
    }
    std::string extra;
    if (std::getline(in, extra, ','))
        throw UsageError("--powers needs exactly three integers");
    try {
        return penc::PowerTriple(vals[0], vals[1], vals[2]);
    } catch (const penc::ParameterError& e) {
        throw UsageError(e.what());
    }
}

// host:port, with the host part optional for listeners.
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& text,
                                                     const std::string& default_host) {
    auto colon = text.rfind(':');
    std::string host = default_host;
    std::string port_text = text;
    if (colon != std::string::npos) {
        host = text.substr(0, colon);
        port_text = text.substr(colon + 1);
    }
    try {
        unsigned long p = std::stoul(port_text);
        if (p > 65535)
            throw std::out_of_range("port");
        return {host, static_cast<std::uint16_t>(p)};
    } catch (const std::exception&) {
        throw UsageError("bad port in endpoint: " + text);
    }
}

void check_period(std::int64_t period) {
    if (period < 4 || period % 4 != 0 || period > 0xFFFF)
        throw UsageError("--period must be a multiple of 4 in [4, 65535]");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"polyadic residue-class codec and transfer tool"};
    app.require_subcommand(1);

    // table
    auto* table = app.add_subcommand("table", "print the arity-shape table");
    std::int64_t a_max = 9, b_max = 10;
    std::string format = "text";
    table->add_option("--a-max", a_max, "largest residue a");
    table->add_option("--b-max", b_max, "largest modulus b");
    table->add_option("--format", format, "text or csv")
        ->check(CLI::IsMember({"text", "csv"}));
    std::string table_out = "-";
    table->add_option("-o,--out", table_out, "output path, - for stdout");

    // shape
    auto* shape = app.add_subcommand("shape", "arity shape of one class");
    std::int64_t shape_a = 0, shape_b = 0;
    shape->add_option("--a", shape_a, "residue a")->required();
    shape->add_option("--b", shape_b, "modulus b")->required();

    // shared codec options
    std::string key_hex, powers_text = "1,2,3", in_path = "-", out_path = "-";
    std::int64_t period = 64, periods = 1;

    auto* enc = app.add_subcommand("encrypt", "encrypt bytes into a session file");
    enc->add_option("-k,--key", key_hex, "32 hex chars (or PENC_KEY)");
    enc->add_option("--powers", powers_text, "three distinct positive powers");
    enc->add_option("--period", period, "samples per waveform period");
    enc->add_option("--periods", periods, "periods per frame");
    enc->add_option("-i,--in", in_path, "plaintext input, - for stdin");
    enc->add_option("-o,--out", out_path, "session output, - for stdout");

    auto* dec = app.add_subcommand("decrypt", "decrypt a session file");
    dec->add_option("-k,--key", key_hex, "32 hex chars (or PENC_KEY)");
    dec->add_option("--powers", powers_text, "powers used by the sender");
    dec->add_option("-i,--in", in_path, "session input, - for stdin");
    dec->add_option("-o,--out", out_path, "plaintext output, - for stdout");

    // transport
    std::string to_endpoint, listen_endpoint;
    double timeout_s = 30.0;
    std::uint64_t max_bytes = penc::default_session_cap;

    auto* send = app.add_subcommand("send", "send a session to a receiver");
    send->add_option("--to", to_endpoint, "host:port of the receiver")->required();
    send->add_option("-i,--in", in_path, "session input, - for stdin");
    send->add_option("--timeout", timeout_s, "seconds to keep trying");

    auto* recv = app.add_subcommand("recv", "receive one session");
    recv->add_option("--listen", listen_endpoint, "[host:]port to listen on")
        ->required();
    recv->add_option("-o,--out", out_path, "session output, - for stdout");
    recv->add_option("--timeout", timeout_s, "seconds to wait");
    recv->add_option("--max-bytes", max_bytes, "session size cap");
    std::string recv_key_hex, plain_out;
    recv->add_option("-k,--key", recv_key_hex,
                     "also decrypt the received session with this key");
    recv->add_option("--plaintext-out", plain_out,
                     "where decrypted bytes go (with --key)");
    recv->add_option("--powers", powers_text, "powers used by the sender");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    auto timeout = std::chrono::milliseconds(
        static_cast<std::int64_t>(timeout_s * 1000.0));

    try {
        if (*table) {
            if (a_max < 1 || b_max < 2)
                throw UsageError("table needs --a-max >= 1 and --b-max >= 2");
            auto t = penc::build_table(a_max, b_max);
            auto fmt = format == "csv" ? penc::TableFormat::csv
                                       : penc::TableFormat::text;
            write_text(table_out, penc::render_table(t, fmt));
            return exit_ok;
        }

        if (*shape) {
            if (shape_b < 1 || shape_a < 0 || shape_a > shape_b - 1)
                throw UsageError("shape needs 0 <= a <= b-1 and b >= 1");
            auto s = penc::arity_shape(penc::CongruenceClass(shape_a, shape_b));
            std::ostringstream os;
            if (s.n)
                os << "m=" << s.m << " n=" << *s.n << " I=" << s.I
                   << " J=" << penc::to_string(*s.J) << '\n';
            else
                os << "m=" << s.m << " n=- (no ring)" << '\n';
            write_text("-", os.str());
            return exit_ok;
        }

        if (*enc) {
            check_period(period);
            if (periods < 1 || periods > 0xFFFF)
                throw UsageError("--periods must be in [1, 65535]");
            auto key = key_from_options(key_hex);
            auto powers = parse_powers(powers_text);
            auto plaintext = read_input(in_path);
            auto session = penc::encrypt_to_session(
                plaintext, key, powers, {}, static_cast<std::uint16_t>(period),
                static_cast<std::uint16_t>(periods));
            write_output(out_path, penc::write_session(session));
            return exit_ok;
        }

        if (*dec) {
            auto key = key_from_options(key_hex);
            auto powers = parse_powers(powers_text);
            auto bytes = read_input(in_path);
            auto session = penc::read_session(bytes);
            auto plaintext = penc::decrypt_session(session, key, powers);
            write_output(out_path, plaintext);
            return exit_ok;
        }

        if (*send) {
            auto [host, port] = parse_endpoint(to_endpoint, "127.0.0.1");
            auto bytes = read_input(in_path);
            penc::send_session_bytes(host, port, bytes, timeout);
            return exit_ok;
        }

        if (*recv) {
            auto [host, port] = parse_endpoint(listen_endpoint, "127.0.0.1");
            auto bytes = penc::recv_session_bytes(host, port, timeout, max_bytes);
            write_output(out_path, bytes);
            if (!recv_key_hex.empty()) {
                auto key = key_from_options(recv_key_hex);
                auto powers = parse_powers(powers_text);
                auto session = penc::read_session(bytes);
                auto plaintext = penc::decrypt_session(session, key, powers);
                write_output(plain_out.empty() ? "-" : plain_out, plaintext);
            }
            return exit_ok;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return exit_io;
    } catch (const penc::TransportError& e) {
        std::cerr << "transport error: " << e.what() << '\n';
        return exit_transport;
    } catch (const penc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_decode;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_decode;
    }
    return exit_usage;
}
