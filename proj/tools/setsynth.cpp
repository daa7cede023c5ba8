// CLI entry point; filled in once the pipeline exists.
int main() { return 0; }
