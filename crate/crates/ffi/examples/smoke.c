#include <stdio.h>
#include "thematic.h"
int main(void) {
    const char *json = "{\"rows\":1,\"cols\":1,\"kind\":\"laurent\",\"terms\":[{\"power\":-3,\"matrix\":[[[1.0,0.0]]]}]}";
    ThmSymbol *s = NULL;
    ThmStatus st = thm_symbol_from_json(json, &s);
    if (st != THM_STATUS_OK) { printf("parse failed %d: %s\n", st, thm_last_error_message()); return 1; }
    size_t buf[8], len = 0;
    thm_dim_table(s, 1.0, NULL, buf, 8, &len);
    printf("version %s, D =", thm_version());
    for (size_t i = 0; i < len; i++) printf(" %zu", buf[i]);
    printf("\n");
    thm_symbol_free(s);
    return 0;
}
