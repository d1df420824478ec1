#include "support/subprocess.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace subprocess {

Result run(const std::string& command) {
    Result r;
    std::string wrapped = command + " 2>&1";
    FILE* pipe = popen(wrapped.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed: " + command);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
    int status = pclose(pipe);
    if (status == -1)
        r.exit_code = -1;
    else if (WIFEXITED(status))
        r.exit_code = WEXITSTATUS(status);
    else
        r.exit_code = 128 + WTERMSIG(status);
    return r;
}

std::string quote(const std::string& arg) {
    std::string out = "'";
    for (char c : arg) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    out += "'";
    return out;
}

std::string cli_bin() {
    const char* p = std::getenv("NOISEKEY_CLI_BIN");
    if (!p || !*p) {
        std::fprintf(stderr, "NOISEKEY_CLI_BIN is not set\n");
        std::abort();
    }
    return p;
}

std::string golden_dir() {
    const char* p = std::getenv("NOISEKEY_GOLDEN_DIR");
    if (!p || !*p) {
        std::fprintf(stderr, "NOISEKEY_GOLDEN_DIR is not set\n");
        std::abort();
    }
    return p;
}

std::string make_temp_dir(const std::string& tag) {
    std::string tmpl = "/tmp/noisekey_" + tag + "_XXXXXX";
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (!mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed");
    return std::string(buf.data());
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

void spawn_logged(const std::string& command, const std::string& log_path) {
    std::string full = "( " + command + " > " + quote(log_path) + " 2>&1; echo \"EXIT:$?\" >> " +
                       quote(log_path) + " ) &";
    int rc = std::system(full.c_str());
    if (rc != 0) throw std::runtime_error("background spawn failed: " + command);
}

std::string wait_for(const std::string& log_path, const std::string& needle, double seconds) {
    auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(seconds);
    std::string seen;
    for (;;) {
        std::ifstream in(log_path, std::ios::binary);
        if (in)
            seen.assign((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (seen.find(needle) != std::string::npos) return seen;
        if (std::chrono::steady_clock::now() > deadline) return seen;
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
}

}  // namespace subprocess
