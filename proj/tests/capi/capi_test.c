#include <math.h>
#include <stdio.h>
#include <string.h>

#include "rtg/rtg.h"

static int failed = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond);  \
      failed = 1;                                                 \
    }                                                             \
  } while (0)

int main(void) {
  rtg_model* m = NULL;
  EXPECT(rtg_model_from_json("{\"kind\":\"ford\",\"alpha\":\"1/2\"}", &m) == RTG_OK);

  char* exact = NULL;
  double v = 0;
  EXPECT(rtg_splitting_prob(m, "{1,2}{3}", &exact, &v) == RTG_OK);
  EXPECT(exact && strcmp(exact, "1/3") == 0);
  EXPECT(fabs(v - 1.0 / 3) < 1e-15);
  rtg_free_string(exact);

  EXPECT(rtg_lambda(m, "1", 4, &exact, &v) == RTG_OK);
  EXPECT(exact && strcmp(exact, "15/8") == 0);
  rtg_free_string(exact);

  /* same seed, same tree */
  rtg_tree *a = NULL, *b = NULL;
  EXPECT(rtg_grow(m, 30, 42, &a) == RTG_OK);
  EXPECT(rtg_grow(m, 30, 42, &b) == RTG_OK);
  char *na = NULL, *nb = NULL;
  EXPECT(rtg_tree_newick(a, 0, &na) == RTG_OK);
  EXPECT(rtg_tree_newick(b, 0, &nb) == RTG_OK);
  EXPECT(na && nb && strcmp(na, nb) == 0);
  EXPECT(rtg_tree_leaf_count(a) == 30);

  rtg_tree* c = NULL;
  EXPECT(rtg_tree_from_newick(na, &c) == RTG_OK);
  EXPECT(rtg_tree_prob(m, c, &exact, &v) == RTG_OK);
  rtg_free_string(exact);
  rtg_free_string(na);
  rtg_free_string(nb);
  rtg_tree_free(a);
  rtg_tree_free(b);
  rtg_tree_free(c);

  rtg_measure* d = NULL;
  EXPECT(rtg_measure_from_model(m, "1", &d) == RTG_OK);
  EXPECT(rtg_measure_cylinder(d, "{1}{2}", &exact, &v) == RTG_OK);
  EXPECT(exact && strcmp(exact, "1") == 0);
  rtg_free_string(exact);
  rtg_measure_free(d);

  /* errors */
  rtg_model* bad = NULL;
  EXPECT(rtg_model_from_json("{\"kind\":\"ford\",\"alpha\":\"3/2\"}", &bad) == RTG_ERR_SPEC);
  EXPECT(strlen(rtg_last_error()) > 0);
  EXPECT(rtg_model_from_json("{oops", &bad) == RTG_ERR_SPEC);
  EXPECT(rtg_splitting_prob(NULL, "{1}{2}", NULL, &v) == RTG_ERR_SPEC);
  rtg_tree* big = NULL;
  EXPECT(rtg_tree_prob(m, NULL, NULL, &v) == RTG_ERR_SPEC);
  (void)big;

  char* out = NULL;
  EXPECT(rtg_run("laws", "{\"model\":{\"kind\":\"ford\",\"alpha\":\"1/2\"},\"n\":3}", &out) == RTG_OK);
  EXPECT(out && strstr(out, "1/3") != NULL);
  rtg_free_string(out);
  EXPECT(rtg_run("nonsense", "{}", &out) == RTG_ERR_SPEC);

  rtg_model_free(m);
  if (!failed) printf("capi ok\n");
  return failed;
}
