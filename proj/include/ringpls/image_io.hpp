#pragma once

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>

#include <jpeglib.h>
#include <png.h>

#include "ringpls/common.hpp"
#include "ringpls/image.hpp"

namespace ringpls {

struct ImageDecodeError : InputError { using InputError::InputError; };

inline ImageRgb decode_png(const std::string& path) {
    png_image im;
    std::memset(&im, 0, sizeof(im));
    im.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&im, path.c_str())) {
        std::string msg = im.message;
        png_image_free(&im);
        throw ImageDecodeError("failed to read PNG '" + path + "': " + msg);
    }
    im.format = PNG_FORMAT_RGB;
    ImageRgb out(static_cast<int>(im.width), static_cast<int>(im.height));
    if (!png_image_finish_read(&im, nullptr, out.pixels().data(), 0, nullptr)) {
        std::string msg = im.message;
        png_image_free(&im);
        throw ImageDecodeError("failed to decode PNG '" + path + "': " + msg);
    }
    return out;
}

inline void encode_png(const std::string& path, const ImageRgb& image) {
    png_image im;
    std::memset(&im, 0, sizeof(im));
    im.version = PNG_IMAGE_VERSION;
    im.width = static_cast<png_uint_32>(image.width());
    im.height = static_cast<png_uint_32>(image.height());
    im.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&im, path.c_str(), 0, image.pixels().data(), 0, nullptr)) {
        std::string msg = im.message;
        png_image_free(&im);
        throw Error("failed to write PNG '" + path + "': " + msg);
    }
}

namespace detail {

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

inline void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

struct FileHandle {
    std::FILE* f = nullptr;
    explicit FileHandle(const std::string& path) : f(std::fopen(path.c_str(), "rb")) {}
    ~FileHandle() {
        if (f) std::fclose(f);
    }
    FileHandle(const FileHandle&) = delete;
    FileHandle& operator=(const FileHandle&) = delete;
};

}  // namespace detail

inline ImageRgb decode_jpeg(const std::string& path) {
    detail::FileHandle file(path);
    if (!file.f) throw ImageDecodeError("cannot open '" + path + "'");

    jpeg_decompress_struct cinfo;
    detail::JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = detail::jpeg_error_exit;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw ImageDecodeError("failed to decode JPEG '" + path + "': " + err.message);
    }

    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, file.f);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    ImageRgb out(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height));
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = reinterpret_cast<JSAMPROW>(
            out.pixels().data() + static_cast<size_t>(cinfo.output_scanline) * out.width());
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return out;
}

/// Decodes PNG or JPEG based on the file's magic bytes.
inline ImageRgb decode_image(const std::string& path) {
    unsigned char magic[4] = {0, 0, 0, 0};
    {
        detail::FileHandle file(path);
        if (!file.f) throw ImageDecodeError("cannot open '" + path + "'");
        if (std::fread(magic, 1, sizeof(magic), file.f) != sizeof(magic)) {
            throw ImageDecodeError("'" + path + "' is too short to be an image");
        }
    }
    if (magic[0] == 0x89 && magic[1] == 'P' && magic[2] == 'N' && magic[3] == 'G') {
        return decode_png(path);
    }
    if (magic[0] == 0xFF && magic[1] == 0xD8) {
        return decode_jpeg(path);
    }
    throw ImageDecodeError("'" + path + "' is neither PNG nor JPEG");
}

}  // namespace ringpls
