var buildReport = require('report-lib');
var iterations = parseInt(process.argv[2] || '1', 10);
var result = buildReport(iterations);
console.log('checksum', result.checksum, 'iterations', iterations, 'teams', result.teams);
