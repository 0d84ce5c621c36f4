const http = require('http');
module.exports.request = (url) =>
  new Promise((resolve, reject) => {
    const req = http.request(url, res => {
      res.on('data', chunk => {})
        .on('end', () => {
          /* omitted */
          resolve( res);
        })
        .on('timeout', () => reject(req)); // dead listener
    });
    req.end();
  });
