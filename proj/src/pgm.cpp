#include "aosikit/pgm.hpp"

#include <fstream>

namespace aosikit::io {

namespace {

struct PgmData {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bytes;
};

// Header tokens may be separated by whitespace and '#' comments.
std::string next_token(std::istream& in, const std::string& path) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty())
                return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    if (tok.empty())
        throw ParseError(path + ": truncated PGM header");
    return tok;
}

int parse_int(const std::string& tok, const std::string& path) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size())
            throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(path + ": bad PGM header token '" + tok + "'");
    }
}

PgmData read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(path.string() + ": cannot open");

    if (next_token(in, path.string()) != "P5")
        throw ParseError(path.string() + ": not a binary PGM (P5)");
    PgmData out;
    out.width = parse_int(next_token(in, path.string()), path.string());
    out.height = parse_int(next_token(in, path.string()), path.string());
    const int maxval = parse_int(next_token(in, path.string()), path.string());
    if (out.width <= 0 || out.height <= 0)
        throw ParseError(path.string() + ": bad PGM dimensions");
    if (maxval != 255)
        throw ParseError(path.string() + ": expected maxval 255, got " +
                         std::to_string(maxval));

    const std::size_t n = static_cast<std::size_t>(out.width) * out.height;
    out.bytes.resize(n);
    in.read(reinterpret_cast<char*>(out.bytes.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
        throw ParseError(path.string() + ": truncated PGM pixel data");
    return out;
}

void write_pgm(const std::filesystem::path& path, int width, int height,
               const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(path.string() + ": cannot open for writing");
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error(path.string() + ": write failed");
}

}  // namespace

csm::Mask read_mask_pgm(const std::filesystem::path& path) {
    const PgmData pgm = read_pgm(path);
    csm::Mask mask(pgm.width, pgm.height, 0);
    for (std::size_t i = 0; i < pgm.bytes.size(); ++i) {
        if (pgm.bytes[i] == 0)
            continue;
        if (pgm.bytes[i] != 255)
            throw ParseError(path.string() + ": mask pixel value " +
                             std::to_string(pgm.bytes[i]) + " (expected 0 or 255)");
        mask.data[i] = 1;
    }
    return mask;
}

void write_mask_pgm(const std::filesystem::path& path, const csm::Mask& mask) {
    std::vector<std::uint8_t> bytes(mask.data.size());
    for (std::size_t i = 0; i < bytes.size(); ++i)
        bytes[i] = mask.data[i] ? 255 : 0;
    write_pgm(path, mask.width, mask.height, bytes);
}

csm::LabelGrid read_label_pgm(const std::filesystem::path& path) {
    const PgmData pgm = read_pgm(path);
    csm::LabelGrid labels(pgm.width, pgm.height, 0);
    for (std::size_t i = 0; i < pgm.bytes.size(); ++i) {
        if (pgm.bytes[i] > csm::kPartCount)
            throw ParseError(path.string() + ": label value " +
                             std::to_string(pgm.bytes[i]) + " outside palette 0.." +
                             std::to_string(csm::kPartCount));
        labels.data[i] = pgm.bytes[i];
    }
    return labels;
}

void write_label_pgm(const std::filesystem::path& path, const csm::LabelGrid& labels) {
    write_pgm(path, labels.width, labels.height, labels.data);
}

}  // namespace aosikit::io
