namespace binet {}
