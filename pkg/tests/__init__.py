# Package initialization file for tests
