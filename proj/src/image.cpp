#include "leafsight/image.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace leafsight {

namespace {

// Reads one whitespace-delimited header token, skipping '#' comments.
// P6/P4 headers allow comment lines anywhere between tokens.
std::string next_token(const std::string& bytes, std::size_t& pos,
                       const char* field) {
  while (pos < bytes.size()) {
    char c = bytes[pos];
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
    } else {
      break;
    }
  }
  std::size_t start = pos;
  while (pos < bytes.size() &&
         !std::isspace(static_cast<unsigned char>(bytes[pos])) &&
         bytes[pos] != '#') {
    ++pos;
  }
  if (start == pos) throw FormatError(std::string("missing header field: ") + field);
  return bytes.substr(start, pos - start);
}

long parse_positive(const std::string& tok, const char* field) {
  for (char c : tok) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw FormatError(std::string("non-numeric header field: ") + field +
                        " = '" + tok + "'");
  }
  long v = 0;
  try {
    v = std::stol(tok);
  } catch (const std::exception&) {
    throw FormatError(std::string("unparseable header field: ") + field);
  }
  if (v <= 0) throw FormatError(std::string("non-positive header field: ") + field);
  return v;
}

// After the final header token exactly one whitespace byte precedes the
// raster data.
void consume_single_whitespace(const std::string& bytes, std::size_t& pos) {
  if (pos >= bytes.size() ||
      !std::isspace(static_cast<unsigned char>(bytes[pos])))
    throw FormatError("missing whitespace before raster data");
  ++pos;
}

}  // namespace

RgbImage decode_ppm(const std::string& bytes) {
  std::size_t pos = 0;
  std::string magic = next_token(bytes, pos, "magic");
  if (magic != "P6") throw FormatError("magic: expected P6, got '" + magic + "'");
  long w = parse_positive(next_token(bytes, pos, "width"), "width");
  long h = parse_positive(next_token(bytes, pos, "height"), "height");
  std::string maxval_tok = next_token(bytes, pos, "maxval");
  long maxval = parse_positive(maxval_tok, "maxval");
  if (maxval != 255)
    throw FormatError("maxval: expected 255, got '" + maxval_tok + "'");
  consume_single_whitespace(bytes, pos);

  std::size_t need = static_cast<std::size_t>(w) * h * 3;
  if (bytes.size() - pos < need)
    throw FormatError("pixel data: truncated, expected " +
                      std::to_string(need) + " bytes, have " +
                      std::to_string(bytes.size() - pos));

  RgbImage img = RgbImage::zeros(w, h);
  const auto* p = reinterpret_cast<const std::uint8_t*>(bytes.data() + pos);
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      img.r(y, x) = *p++;
      img.g(y, x) = *p++;
      img.b(y, x) = *p++;
    }
  }
  return img;
}

std::string encode_ppm(const RgbImage& img) {
  std::ostringstream out;
  out << "P6\n" << img.width() << " " << img.height() << "\n255\n";
  std::string header = out.str();
  std::string data;
  data.reserve(header.size() + static_cast<std::size_t>(img.width()) * img.height() * 3);
  data = header;
  for (Index y = 0; y < img.height(); ++y) {
    for (Index x = 0; x < img.width(); ++x) {
      data.push_back(static_cast<char>(img.r(y, x)));
      data.push_back(static_cast<char>(img.g(y, x)));
      data.push_back(static_cast<char>(img.b(y, x)));
    }
  }
  return data;
}

BinaryMask decode_pbm(const std::string& bytes) {
  std::size_t pos = 0;
  std::string magic = next_token(bytes, pos, "magic");
  if (magic != "P4") throw FormatError("magic: expected P4, got '" + magic + "'");
  long w = parse_positive(next_token(bytes, pos, "width"), "width");
  long h = parse_positive(next_token(bytes, pos, "height"), "height");
  consume_single_whitespace(bytes, pos);

  std::size_t row_bytes = (static_cast<std::size_t>(w) + 7) / 8;
  if (bytes.size() - pos < row_bytes * h)
    throw FormatError("pixel data: truncated P4 raster");

  BinaryMask mask = BinaryMask::zeros(w, h);
  for (Index y = 0; y < h; ++y) {
    const auto* row = reinterpret_cast<const std::uint8_t*>(bytes.data() + pos + y * row_bytes);
    for (Index x = 0; x < w; ++x) {
      mask.m(y, x) = (row[x / 8] >> (7 - x % 8)) & 1;
    }
  }
  return mask;
}

std::string encode_pbm(const BinaryMask& mask) {
  std::ostringstream out;
  out << "P4\n" << mask.width() << " " << mask.height() << "\n";
  std::string data = out.str();
  std::size_t row_bytes = (static_cast<std::size_t>(mask.width()) + 7) / 8;
  for (Index y = 0; y < mask.height(); ++y) {
    std::string row(row_bytes, '\0');
    for (Index x = 0; x < mask.width(); ++x) {
      if (mask.m(y, x)) row[x / 8] |= static_cast<char>(1 << (7 - x % 8));
    }
    data += row;
  }
  return data;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

RgbImage read_ppm_file(const std::string& path) { return decode_ppm(read_file(path)); }
void write_ppm_file(const std::string& path, const RgbImage& img) {
  write_file(path, encode_ppm(img));
}
BinaryMask read_pbm_file(const std::string& path) { return decode_pbm(read_file(path)); }
void write_pbm_file(const std::string& path, const BinaryMask& mask) {
  write_file(path, encode_pbm(mask));
}

}  // namespace leafsight
