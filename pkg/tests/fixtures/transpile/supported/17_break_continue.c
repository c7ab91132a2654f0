None first_multiple(None limit, None k) {
    None found;
    None i;
    found = 0;
    for (i = 1; i < limit; i += 1) {
        if (i % k != 0) {
            continue;
        }
        found = i;
        break;
    }
    return found;
}
