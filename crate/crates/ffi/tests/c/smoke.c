#include <stdio.h>
#include <string.h>

#include "drwlog.h"

#define CHECK(c)                                                  \
  do {                                                            \
    if (!(c)) {                                                   \
      fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #c,         \
              drwlog_last_error() ? drwlog_last_error() : "-");   \
      return 1;                                                   \
    }                                                             \
  } while (0)

int main(void) {
  uint32_t r[1] = {1};
  DrwlogModel *m = NULL;
  CHECK(drwlog_model_new(3, 1, 0, 1, 1, r, 1, 5, &m) == DRWLOG_STATUS_OK);

  DrwlogReport *rep = NULL;
  CHECK(drwlog_verify(m, "thm1", 1, 0, &rep) == DRWLOG_STATUS_OK);
  CHECK(drwlog_report_passed(rep));
  size_t lhs = 0, rhs = 0;
  CHECK(drwlog_report_dims(rep, &lhs, &rhs) == DRWLOG_STATUS_OK);
  CHECK(lhs == rhs && lhs > 0);
  char *json = NULL;
  CHECK(drwlog_report_json(rep, &json) == DRWLOG_STATUS_OK);
  CHECK(strstr(json, "\"schema\": 1") != NULL);
  drwlog_string_free(json);
  drwlog_report_free(rep);

  char *fact = NULL;
  CHECK(drwlog_decompose(m, "dlog(1+T1^2)", &fact) == DRWLOG_STATUS_OK);
  CHECK(strncmp(fact, "dlog(", 5) == 0);
  drwlog_string_free(fact);
  CHECK(drwlog_decompose(m, "dlog(T1)", &fact) == DRWLOG_STATUS_NOT_IN_LOG_PART);

  CHECK(drwlog_verify(m, "nope", 1, 0, &rep) == DRWLOG_STATUS_CONFIG);
  CHECK(drwlog_last_error() != NULL);
  drwlog_model_free(m);

  uint32_t bad[1] = {3};
  CHECK(drwlog_model_new(3, 1, 0, 1, 1, bad, 1, 5, &m) == DRWLOG_STATUS_INVALID_MODEL);
  printf("ok %s\n", drwlog_version());
  return 0;
}
