#ifndef RTG_RTG_H
#define RTG_RTG_H

#include <stdint.h>

#if defined(RTG_BUILDING_LIBRARY)
#define RTG_API __attribute__((visibility("default")))
#else
#define RTG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct rtg_model rtg_model;
typedef struct rtg_measure rtg_measure;
typedef struct rtg_tree rtg_tree;

typedef enum rtg_status {
  RTG_OK = 0,
  RTG_ERR_SPEC = 2,      /* malformed input or unsupported request */
  RTG_ERR_RESOURCE = 3,  /* enumeration or memory guard */
  RTG_ERR_INTERNAL = 4
} rtg_status;

/* Message of the last failure on this thread ("" if none). */
RTG_API const char* rtg_last_error(void);
/* Strings returned through char** out-parameters are owned by the caller. */
RTG_API void rtg_free_string(char* s);
RTG_API const char* rtg_version(void);

/* Models: {"kind":"alpha_theta","alpha":"1/2","theta":"1/2"} etc. */
RTG_API rtg_status rtg_model_from_json(const char* spec, rtg_model** out);
RTG_API rtg_status rtg_model_to_json(const rtg_model* m, char** out);
RTG_API rtg_status rtg_model_describe(const rtg_model* m, char** out);
RTG_API void rtg_model_free(rtg_model* m);

/* Probabilities. exact_out may be NULL; it receives "p/q" in exact mode and
   is left NULL when the model only supports floating point. */
RTG_API rtg_status rtg_splitting_prob(const rtg_model* m, const char* partition, char** exact_out, double* value);
RTG_API rtg_status rtg_tree_prob(const rtg_model* m, const rtg_tree* t, char** exact_out, double* value);
RTG_API rtg_status rtg_lambda(const rtg_model* m, const char* lambda2, int n, char** exact_out, double* value);

/* Dislocation measures */
RTG_API rtg_status rtg_measure_from_json(const char* spec, rtg_measure** out);
RTG_API rtg_status rtg_measure_from_model(const rtg_model* m, const char* lambda2, rtg_measure** out);
RTG_API rtg_status rtg_measure_to_json(const rtg_measure* d, char** out);
RTG_API rtg_status rtg_measure_cylinder(const rtg_measure* d, const char* partition, char** exact_out,
                                        double* value);
RTG_API rtg_status rtg_measure_laplace(const rtg_measure* d, double s, double* value);
RTG_API void rtg_measure_free(rtg_measure* d);

/* Trees */
RTG_API rtg_status rtg_grow(const rtg_model* m, int n, uint64_t seed, rtg_tree** out);
RTG_API rtg_status rtg_tree_from_newick(const char* text, rtg_tree** out);
RTG_API rtg_status rtg_tree_from_json(const char* text, rtg_tree** out);
RTG_API rtg_status rtg_tree_newick(const rtg_tree* t, int with_lengths, char** out);
RTG_API rtg_status rtg_tree_json(const rtg_tree* t, char** out);
RTG_API int rtg_tree_leaf_count(const rtg_tree* t);
/* edge count from the root to the deepest leaf */
RTG_API int rtg_tree_height(const rtg_tree* t);
/* "{1,3}{2}"; fails for a one-leaf tree */
RTG_API rtg_status rtg_tree_first_split(const rtg_tree* t, char** out);
RTG_API void rtg_tree_free(rtg_tree* t);

/* Report commands: laws, kappa, residual, lamperti, ctmc, massfrag, check,
   experiment. The request is a JSON object; the output is CSV, JSON or Newick
   text as selected by its "format" key. */
RTG_API rtg_status rtg_run(const char* command, const char* request_json, char** out);

#ifdef __cplusplus
}
#endif

#endif
