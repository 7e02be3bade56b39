// Placeholder main; subcommands are wired up once all modules exist.
int main() { return 0; }
