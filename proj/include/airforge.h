/* airforge -- synthetic aerial dataset engine, public C API.
 *
 * Every function returns AF_OK or an error code; af_last_error() holds a
 * thread-local message for the most recent failure on the calling thread.
 * Objects are opaque handles released with their matching _free function.
 * Strings returned through char** out-parameters are heap-allocated by the
 * library and released with af_string_free().
 */
#ifndef AIRFORGE_H
#define AIRFORGE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum af_status {
    AF_OK = 0,
    AF_ERROR_INVALID_ARGUMENT = 1,
    AF_ERROR_IO = 2,
    AF_ERROR_PARSE = 3,
    AF_ERROR_RUNTIME = 4
} af_status;

const char *af_version(void);
const char *af_last_error(void);
void af_string_free(char *s);

/* ---- meshes ---------------------------------------------------------- */

typedef struct af_mesh af_mesh;

af_status af_mesh_generate_uav(int arms, double arm_length, double body_radius,
                               double rotor_radius, double gear_height, uint64_t seed,
                               af_mesh **out);
af_status af_mesh_load_obj(const char *path, af_mesh **out);
af_status af_mesh_write_obj(const af_mesh *mesh, const char *path);
size_t af_mesh_vertex_count(const af_mesh *mesh);
size_t af_mesh_triangle_count(const af_mesh *mesh);
void af_mesh_free(af_mesh *mesh);

/* ---- environment maps ------------------------------------------------ */

typedef struct af_envmap af_envmap;

/* condition: clear_day | partly_cloudy | overcast | twilight | dusk_warm */
af_status af_envmap_synthesize(const char *condition, double sun_azimuth_deg,
                               double sun_elevation_deg, int width, uint64_t seed,
                               af_envmap **out);
af_status af_envmap_load_hdr(const char *path, af_envmap **out);
af_status af_envmap_write_hdr(const af_envmap *map, const char *path);
void af_envmap_size(const af_envmap *map, int *width, int *height);
void af_envmap_free(af_envmap *map);

/* ---- dataset generation ---------------------------------------------- */

typedef struct af_generate_options {
    int workers;            /* >= 1; 0 = single worker */
    int has_seed_override;  /* nonzero: use seed_override instead of the config seed */
    uint64_t seed_override;
    int64_t limit_images;   /* render at most this many images; -1 = all */
} af_generate_options;

/* Resolved plan arithmetic as JSON, without rendering anything. */
af_status af_plan_summary(const char *config_path, const af_generate_options *options,
                          char **summary_json);

/* Runs the pipeline; report JSON carries totals and the plan summary. */
af_status af_generate(const char *config_path, const char *output_dir,
                      const af_generate_options *options, char **report_json);

/* Consistency checks for a generated dataset. The report JSON lists
 * violations; *violation_count receives their number. */
af_status af_validate(const char *dataset_dir, char **report_json, int64_t *violation_count);

/* ---- evaluation toolkit ----------------------------------------------- */

/* gt: COCO annotations JSON. detections: COCO-results JSON or plain text
 * `image_id class conf x_min y_min x_max y_max` lines. */
af_status af_eval(const char *gt_path, const char *detections_path, double iou_threshold,
                  char **report_json);

/* Clusters ground-truth box sizes from a labels directory (YOLO .txt
 * files) or a COCO annotations file. distance: "iou" or "euclidean". */
af_status af_anchors(const char *labels_path, int k, const char *distance, int grid_size,
                     uint64_t seed, char **anchors_json);

/* mode: overexposed | underexposed. strength <= 0 selects the mode's
 * default (2.5 / 0.4). Writes <name>.<mode>.png next to each input. */
af_status af_perturb(const char *image_path, const char *mode, double strength,
                     char **report_json);

/* Writes the built-in asset pack (OBJ models + HDR skies) under out_dir. */
af_status af_write_builtin_assets(const char *out_dir, char **report_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* AIRFORGE_H */
