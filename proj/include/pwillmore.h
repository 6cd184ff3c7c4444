/* C interface to the p-Willmore flow library.
 *
 * All functions returning pw_status report PW_OK (0) on success; on failure
 * pw_last_error() describes the problem for the calling thread. Out-pointers
 * are written only on success. Handles are freed with the matching *_free.
 */
#ifndef PWILLMORE_H
#define PWILLMORE_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct pw_mesh pw_mesh;
typedef struct pw_flow pw_flow;

typedef enum {
  PW_OK = 0,
  PW_ERR_INVALID_ARGUMENT = 1,
  PW_ERR_IO = 2,
  PW_ERR_MESH = 3,
  PW_ERR_SOLVER = 4,
  PW_ERR_STEP_FAILED = 5
} pw_status;

typedef enum { PW_REG_OFF = 0, PW_REG_LINEAR = 1, PW_REG_NONLINEAR = 2 } pw_reg_mode;

/* Message for the most recent failure on this thread; never NULL. */
const char* pw_last_error(void);

/* ---- meshes ------------------------------------------------------------ */

/* Formats: Wavefront OBJ and ascii PLY, chosen by file extension. */
pw_status pw_mesh_load(const char* path, pw_mesh** out);
pw_status pw_mesh_save(const pw_mesh* m, const char* path);
pw_status pw_mesh_create(const double* vertices, int vertex_count, const int* faces,
                         int face_count, pw_mesh** out);
void pw_mesh_free(pw_mesh* m);

int pw_mesh_vertex_count(const pw_mesh* m);
int pw_mesh_face_count(const pw_mesh* m);
/* Copies 3*vertex_count doubles into `out`. */
pw_status pw_mesh_vertices(const pw_mesh* m, double* out);

typedef struct {
  int is_closed;
  int is_oriented;
  int genus; /* meaningful when closed */
  int edge_count;
  int boundary_edge_count;
  double min_face_quality; /* inradius / circumradius */
  double mean_edge_length;
  double area;
  double volume; /* 0 when not closed */
} pw_mesh_info;

pw_status pw_mesh_get_info(const pw_mesh* m, pw_mesh_info* out);

/* Scaled p-Willmore energy (integral of |Y|^p); p = 0 gives the area. */
pw_status pw_mesh_energy(const pw_mesh* m, int p, double* out);

/* ---- flow -------------------------------------------------------------- */

typedef struct {
  int p;
  int fix_area;
  int fix_volume;
  double tau0;
  double scale;   /* timestep growth factor, >= 1 */
  double tau_max;
  int quad_degree;
  pw_reg_mode reg_mode;
  double epsilon; /* regularization penalty */
} pw_flow_config;

/* p = 2, no constraints, tau0 = tau_max = 1e-4, scale = 1, degree 7,
 * nonlinear regularization with epsilon = 1e-5. */
void pw_flow_config_init(pw_flow_config* cfg);

pw_status pw_flow_create(const pw_mesh* m, const pw_flow_config* cfg, pw_flow** out);
void pw_flow_free(pw_flow* f);

typedef struct {
  int step;
  double t;
  double tau; /* size of the accepted step */
  double energy;
  double area;
  double volume;
  double newton_residual;
  double cd_before; /* conformal distortion around the regularization pass */
  double cd_after;
  double min_face_quality;
} pw_flow_stats;

/* Advances one accepted flow step (with the configured regularization) and
 * reports the post-step state. PW_ERR_STEP_FAILED after a rejected retry. */
pw_status pw_flow_step(pw_flow* f, pw_flow_stats* out);
pw_status pw_flow_current_mesh(const pw_flow* f, pw_mesh** out);

/* ---- standalone regularization ----------------------------------------- */

pw_status pw_regularize(const pw_mesh* m, pw_reg_mode mode, double epsilon, pw_mesh** out,
                        double* cd_before, double* cd_after);

#ifdef __cplusplus
}
#endif

#endif /* PWILLMORE_H */
