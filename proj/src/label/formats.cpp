#include "label/formats.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace airforge {

using ordered_json = nlohmann::ordered_json;

std::string yolo_lines(const std::vector<Annotation> &annotations, int width, int height) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("yolo_lines: zero-sized image");
    std::string out;
    char buf[160];
    for (const Annotation &ann : annotations) {
        const BBox2D &b = ann.bbox;
        double cx = (b.x_min + b.x_max) * 0.5 / width;
        double cy = (b.y_min + b.y_max) * 0.5 / height;
        double w = b.width() / width;
        double h = b.height() / height;
        std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f\n", ann.class_id, cx, cy, w, h);
        out += buf;
    }
    return out;
}

void write_yolo(const std::string &path, const std::vector<Annotation> &annotations, int width,
                int height) {
    std::string text = yolo_lines(annotations, width, height);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_yolo: cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write_yolo: write failed for '" + path + "'");
}

std::vector<YoloRecord> parse_yolo(const std::string &text, const std::string &source_name) {
    std::vector<YoloRecord> records;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        YoloRecord rec;
        std::istringstream ls(line);
        if (!(ls >> rec.class_id >> rec.cx >> rec.cy >> rec.w >> rec.h))
            throw std::runtime_error("parse_yolo: " + source_name + ":" + std::to_string(line_no) +
                                     ": expected 'class cx cy w h'");
        records.push_back(rec);
    }
    return records;
}

std::vector<YoloRecord> load_yolo(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_yolo: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_yolo(buf.str(), path);
}

BBox2D yolo_to_bbox(const YoloRecord &rec, int width, int height) {
    double cx = rec.cx * width, cy = rec.cy * height;
    double w = rec.w * width, h = rec.h * height;
    return {cx - w * 0.5, cy - h * 0.5, cx + w * 0.5, cy + h * 0.5};
}

std::string coco_json(const CocoDataset &dataset) {
    std::set<int64_t> image_ids;
    for (const CocoImage &img : dataset.images)
        if (!image_ids.insert(img.id).second)
            throw std::invalid_argument("coco_json: duplicate image id " + std::to_string(img.id));

    std::vector<const Annotation *> order;
    order.reserve(dataset.annotations.size());
    for (const Annotation &ann : dataset.annotations) order.push_back(&ann);
    std::stable_sort(order.begin(), order.end(), [](const Annotation *a, const Annotation *b) {
        return a->image_id != b->image_id ? a->image_id < b->image_id
                                          : a->instance_id < b->instance_id;
    });

    ordered_json doc;
    doc["images"] = ordered_json::array();
    for (const CocoImage &img : dataset.images)
        doc["images"].push_back({{"id", img.id},
                                 {"file_name", img.file_name},
                                 {"width", img.width},
                                 {"height", img.height}});

    doc["annotations"] = ordered_json::array();
    int64_t next_id = 1;
    for (const Annotation *ann : order) {
        const BBox2D &b = ann->bbox;
        doc["annotations"].push_back({{"id", next_id++},
                                      {"image_id", ann->image_id},
                                      {"category_id", ann->class_id + 1},
                                      {"bbox", {b.x_min, b.y_min, b.width(), b.height()}},
                                      {"area", b.area()},
                                      {"iscrowd", 0}});
    }
    doc["categories"] = ordered_json::array({{{"id", 1}, {"name", "uav"}}});
    return doc.dump(2) + "\n";
}

void write_coco(const std::string &path, const CocoDataset &dataset) {
    std::string text = coco_json(dataset);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_coco: cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write_coco: write failed for '" + path + "'");
}

CocoDataset parse_coco(const std::string &text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const std::exception &e) {
        throw std::runtime_error(std::string("parse_coco: invalid JSON: ") + e.what());
    }
    CocoDataset dataset;
    std::set<int64_t> image_ids, ann_ids;
    for (const auto &img : doc.at("images")) {
        CocoImage ci;
        ci.id = img.at("id").get<int64_t>();
        ci.file_name = img.value("file_name", "");
        ci.width = img.value("width", 0);
        ci.height = img.value("height", 0);
        if (!image_ids.insert(ci.id).second)
            throw std::runtime_error("parse_coco: duplicate image id " + std::to_string(ci.id));
        dataset.images.push_back(std::move(ci));
    }
    for (const auto &ann : doc.at("annotations")) {
        int64_t id = ann.at("id").get<int64_t>();
        if (!ann_ids.insert(id).second)
            throw std::runtime_error("parse_coco: duplicate annotation id " + std::to_string(id));
        const auto &b = ann.at("bbox");
        if (!b.is_array() || b.size() != 4)
            throw std::runtime_error("parse_coco: bbox must be [x, y, w, h]");
        Annotation a;
        a.image_id = ann.at("image_id").get<int64_t>();
        a.class_id = ann.at("category_id").get<int>() - 1;
        double x = b[0].get<double>(), y = b[1].get<double>();
        double w = b[2].get<double>(), h = b[3].get<double>();
        a.bbox = {x, y, x + w, y + h};
        a.instance_id = int(id);
        dataset.annotations.push_back(a);
    }
    return dataset;
}

CocoDataset load_coco(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_coco: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_coco(buf.str());
}

}  // namespace airforge
