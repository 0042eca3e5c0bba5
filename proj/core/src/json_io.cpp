#include "coddlab/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace coddlab {

void write_file_atomic(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        if (!out.flush()) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace coddlab
