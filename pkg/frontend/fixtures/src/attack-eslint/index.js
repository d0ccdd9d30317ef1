var scope = require('eslint-scope-sim');
console.log(JSON.stringify(scope.analyze('var a = 1; { let b = 2; }')));
