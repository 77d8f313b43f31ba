#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "label/annotate.hpp"

namespace airforge {

// --- YOLO / Darknet label files ---------------------------------------
// One line per box: `class cx cy w h`, center/size normalized by the image
// dimensions, 6 decimal places each.

struct YoloRecord {
    int class_id = 0;
    double cx = 0, cy = 0, w = 0, h = 0;  // normalized to [0,1]
};

std::string yolo_lines(const std::vector<Annotation> &annotations, int width, int height);
void write_yolo(const std::string &path, const std::vector<Annotation> &annotations, int width,
                int height);
std::vector<YoloRecord> parse_yolo(const std::string &text, const std::string &source_name = "");
std::vector<YoloRecord> load_yolo(const std::string &path);

BBox2D yolo_to_bbox(const YoloRecord &rec, int width, int height);

// --- COCO object-detection JSON ----------------------------------------

struct CocoImage {
    int64_t id = 0;
    std::string file_name;
    int width = 0;
    int height = 0;
};

struct CocoDataset {
    std::vector<CocoImage> images;
    std::vector<Annotation> annotations;  // bbox in absolute pixels
};

// Serializes the standard detection schema (images / annotations /
// categories, single category "uav", bbox = [x, y, w, h] top-left).
// Annotation ids are assigned 1..N after a sort by (image_id, instance).
std::string coco_json(const CocoDataset &dataset);
void write_coco(const std::string &path, const CocoDataset &dataset);
CocoDataset parse_coco(const std::string &text);
CocoDataset load_coco(const std::string &path);

}  // namespace airforge
