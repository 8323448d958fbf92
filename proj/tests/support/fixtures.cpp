#include "fixtures.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <jpeglib.h>
#include <libexif/exif-data.h>
#include <openssl/evp.h>

namespace facadex::testing {

namespace {

std::string encode_jpeg(int width, int height) {
  jpeg_compress_struct cinfo;
  jpeg_error_mgr jerr;
  cinfo.err = jpeg_std_error(&jerr);
  jpeg_create_compress(&cinfo);
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
  jpeg_mem_dest(&cinfo, &buffer, &size);
  cinfo.image_width = static_cast<JDIMENSION>(width);
  cinfo.image_height = static_cast<JDIMENSION>(height);
  cinfo.input_components = 1;
  cinfo.in_color_space = JCS_GRAYSCALE;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, 90, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  std::vector<JSAMPLE> row(static_cast<std::size_t>(width));
  while (cinfo.next_scanline < cinfo.image_height) {
    for (int x = 0; x < width; ++x)
      row[static_cast<std::size_t>(x)] = static_cast<JSAMPLE>((x * 40 + cinfo.next_scanline * 25) & 0xFF);
    JSAMPROW rows[1] = {row.data()};
    jpeg_write_scanlines(&cinfo, rows, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  std::string out(reinterpret_cast<const char*>(buffer), size);
  std::free(buffer);
  return out;
}

std::string exif_segment(const std::string& artist) {
  ExifData* exif = exif_data_new();
  exif_data_set_byte_order(exif, EXIF_BYTE_ORDER_INTEL);
  ExifEntry* entry = exif_entry_new();
  exif_content_add_entry(exif->ifd[EXIF_IFD_0], entry);
  entry->tag = EXIF_TAG_ARTIST;
  entry->format = EXIF_FORMAT_ASCII;
  entry->components = artist.size() + 1;
  entry->size = static_cast<unsigned int>(artist.size() + 1);
  entry->data = static_cast<unsigned char*>(std::calloc(1, entry->size));
  std::copy(artist.begin(), artist.end(), entry->data);
  exif_entry_unref(entry);

  unsigned char* data = nullptr;
  unsigned int len = 0;
  exif_data_save_data(exif, &data, &len);  // "Exif\0\0" + TIFF
  exif_data_unref(exif);
  if (data == nullptr) throw std::runtime_error("libexif produced no data");
  std::string seg;
  seg += '\xFF';
  seg += '\xE1';
  unsigned int seg_len = len + 2;
  seg += static_cast<char>((seg_len >> 8) & 0xFF);
  seg += static_cast<char>(seg_len & 0xFF);
  seg.append(reinterpret_cast<const char*>(data), len);
  std::free(data);
  return seg;
}

}  // namespace

std::string make_jpeg(int width, int height, std::optional<std::string> artist) {
  std::string jpeg = encode_jpeg(width, height);
  if (!artist) return jpeg;
  return jpeg.substr(0, 2) + exif_segment(*artist) + jpeg.substr(2);
}

std::string openssl_base64(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(bytes.data()),
                          static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string openssl_unbase64(std::string_view text) {
  if (text.empty()) return {};
  std::string out(3 * text.size() / 4 + 1, '\0');
  int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(text.data()),
                          static_cast<int>(text.size()));
  if (n < 0) throw std::runtime_error("invalid base64");
  // EVP_DecodeBlock keeps the zero bytes implied by '=' padding.
  std::size_t pad = 0;
  if (text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

TempDir::TempDir() {
  static std::mt19937_64 rng{std::random_device{}()};
  for (;;) {
    path_ = std::filesystem::temp_directory_path() / ("facadex-test-" + random_word(rng, 12, 12));
    if (std::filesystem::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::filesystem::path TempDir::write(const std::string& name, std::string_view bytes) const {
  std::filesystem::path p = path_ / name;
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  return p;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string random_word(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len) {
  static constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, kAlphabet.size() - 1);
  std::string s(len(rng), 'a');
  for (char& c : s) c = kAlphabet[pick(rng)];
  return s;
}

}  // namespace facadex::testing
